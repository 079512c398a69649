#pragma once

#include <stdexcept>
#include <string>

namespace chronomix {

// Error taxonomy for the estimation pipeline. Each condition that a caller
// can reasonably branch on gets its own type; everything else is plain
// std::invalid_argument from input validation.

struct EmptySample : std::runtime_error {
    explicit EmptySample(const std::string& what) : std::runtime_error(what) {}
};

struct SeriesTooShort : std::runtime_error {
    explicit SeriesTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct GridMismatch : std::runtime_error {
    explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

// v = (v1, v2) lies outside the image of the theta box: the radicand
// v1*v2 + v2 - v1 is negative, no real beta exists.
struct NegativeRadicand : std::runtime_error {
    explicit NegativeRadicand(const std::string& what) : std::runtime_error(what) {}
};

// beta - v2 is numerically zero, alpha = beta(1-beta)/(beta-v2) blows up.
struct DegenerateDenominator : std::runtime_error {
    explicit DegenerateDenominator(const std::string& what) : std::runtime_error(what) {}
};

// The 2x2 Gram block of the quadratic contrast is singular; the two
// identification fields are (numerically) linearly dependent and the
// integral-contrast estimator is undefined.
struct SingularGram : std::runtime_error {
    explicit SingularGram(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidVariance : std::invalid_argument {
    explicit InvalidVariance(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidBandwidth : std::invalid_argument {
    explicit InvalidBandwidth(const std::string& what) : std::invalid_argument(what) {}
};

struct IoFailure : std::runtime_error {
    explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chronomix
