#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chronomix/model.hpp"
#include "chronomix/rng.hpp"

namespace chronomix {

// Full generative configuration for one observed trajectory: latent chain
// parameters, Gaussian AR(1) gold standard, Gaussian i.i.d. poisoning law,
// sample sizes and the reproducibility seed.
struct Scenario {
    ThetaParam theta;
    double phi;    // AR(1) regression coefficient, in (0, 1)
    double m0;     // AR(1) noise mean
    double v0;     // AR(1) noise standard deviation
    double m;      // poisoning mean
    double v;      // poisoning standard deviation
    std::size_t n;         // trajectory length
    std::size_t ref_size;  // reference-sample size N
    std::uint64_t seed;
    std::string name;

    Scenario(ThetaParam theta, double phi, double m0, double v0, double m, double v,
             std::size_t n, std::size_t ref_size, std::uint64_t seed, std::string name = "");

    // Stationary marginal moments of the gold standard.
    double mu0() const { return m0 / (1.0 - phi); }
    double var0() const { return v0 * v0 / (1.0 - phi * phi); }

    Scenario with_n(std::size_t n_new) const;        // keeps ref_size = 2n convention
    Scenario with_seed(std::uint64_t seed_new) const;
};

// Named presets. The poisoning law is (m, v) = (m_scale * mu0,
// v_scale * sqrt(var0)) with (m0, v0^2) = (1, 1); n defaults to 5000 and
// ref_size to 2n.
std::vector<std::string> scenario_preset_names();
Scenario scenario_preset(const std::string& name, std::size_t n = 5000, std::uint64_t seed = 1);

// JSON round trip for scenario files; load also accepts a preset name.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& json_text);
Scenario load_scenario(const std::string& name_or_path);

struct Trajectory {
    std::vector<double> z;  // observed series
    std::vector<int> x;     // hidden labels, 0 = gold standard, 1 = poisoned
};

struct ReferenceSample {
    std::vector<double> marginal;     // i.i.d. draws from the stationary marginal
    std::vector<double> pair_first;   // i.i.d. stationary draws
    std::vector<double> pair_second;  // one AR(1) step applied to pair_first
};

// Latent chain: X_1 from the stationary law, then transitions.
std::vector<int> simulate_chain(const ThetaParam& theta, std::size_t n, RngStream& stream);

// Stationary AR(1) path: first value from N(mu0, var0), then the recursion.
std::vector<double> simulate_ar1(double phi, double m0, double v0, std::size_t n,
                                 RngStream& stream);

// Observed process: chain, gold-standard and poisoning paths are generated
// from three sub-streams of the scenario seed and mixed pointwise.
Trajectory simulate_observed(const Scenario& scenario);

// Independent reference samples used to Monte Carlo the gold-standard CDFs.
ReferenceSample simulate_reference(const Scenario& scenario);

}  // namespace chronomix
