#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "chronomix/model.hpp"

namespace chronomix {

// Posterior law of the latent pair label (k, l) in {0,1}^2 given an observed
// pair, in the order (0,0), (0,1), (1,0), (1,1).
struct PairPosterior {
    std::array<double, 4> probs;
    int map_k;
    int map_l;
};

// Gold-standard pair law parameters needed by the posterior: stationary
// mean/variance and the one-step correlation.
struct GoldPairLaw {
    double mu0;
    double var0;
    double phi;
};

// Poisoning density sampled on grid nodes; evaluated by linear
// interpolation, zero outside the node range, negative values floored at 0.
struct SampledDensity {
    std::vector<double> nodes;
    std::vector<double> values;

    double at(double x) const;
};

// Posterior of the latent pair given (z, zprime):
//   eta(0,0) = lambda1 * g0(z, z'),   eta(0,1) = lambda2 * f0(z) * f1(z'),
//   eta(1,0) = lambda3 * f1(z) * f0(z'), eta(1,1) = lambda4 * f1(z) * f1(z'),
// normalized by their sum. Returns nullopt when all four weights vanish
// (the pair is undecidable, both supports exhausted).
std::optional<PairPosterior> pair_posterior(const ThetaParam& theta, const SampledDensity& f1,
                                            const GoldPairLaw& gold, double z, double zprime);

// Decode a series as non-overlapping pairs (offset 0: (z0,z1),(z2,z3),...;
// offset 1 starts at z1). Undecidable pairs carry no posterior.
struct DecodedPair {
    std::size_t first_index;
    std::optional<PairPosterior> posterior;
};
std::vector<DecodedPair> decode_series(const ThetaParam& theta, const SampledDensity& f1,
                                       const GoldPairLaw& gold, std::span<const double> z,
                                       int offset = 0);

}  // namespace chronomix
