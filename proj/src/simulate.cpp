#include "chronomix/simulate.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chronomix/errors.hpp"

namespace chronomix {

Scenario::Scenario(ThetaParam theta_, double phi_, double m0_, double v0_, double m_, double v_,
                   std::size_t n_, std::size_t ref_size_, std::uint64_t seed_, std::string name_)
    : theta(theta_),
      phi(phi_),
      m0(m0_),
      v0(v0_),
      m(m_),
      v(v_),
      n(n_),
      ref_size(ref_size_),
      seed(seed_),
      name(std::move(name_)) {
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("Scenario: phi must be in (0, 1)");
    if (!(v0 > 0.0)) throw std::invalid_argument("Scenario: v0 must be positive");
    if (!(v > 0.0)) throw std::invalid_argument("Scenario: v must be positive");
    if (n < 2) throw std::invalid_argument("Scenario: n must be >= 2");
    if (ref_size < 2) throw std::invalid_argument("Scenario: ref_size must be >= 2");
    if (!std::isfinite(mu0()) || !std::isfinite(var0()) || !(var0() > 0.0)) {
        throw std::invalid_argument("Scenario: stationary moments not finite and positive");
    }
}

Scenario Scenario::with_n(std::size_t n_new) const {
    return Scenario(theta, phi, m0, v0, m, v, n_new, 2 * n_new, seed, name);
}

Scenario Scenario::with_seed(std::uint64_t seed_new) const {
    Scenario s = *this;
    s.seed = seed_new;
    return s;
}

namespace {

Scenario make_preset(const std::string& name, double alpha, double beta, double phi,
                     double m_scale, double v_scale, std::size_t n, std::uint64_t seed) {
    const double m0 = 1.0, v0 = 1.0;
    const double mu0 = m0 / (1.0 - phi);
    const double var0 = v0 * v0 / (1.0 - phi * phi);
    return Scenario(ThetaParam(alpha, beta), phi, m0, v0, m_scale * mu0,
                    v_scale * std::sqrt(var0), n, 2 * n, seed, name);
}

}  // namespace

std::vector<std::string> scenario_preset_names() {
    return {"S0strong", "S0weak", "S1", "S2", "S3", "S4"};
}

Scenario scenario_preset(const std::string& name, std::size_t n, std::uint64_t seed) {
    if (name == "S0strong") return make_preset(name, 0.7, 0.8, 0.7, 2.5, 0.8, n, seed);
    if (name == "S0weak") return make_preset(name, 0.3, 0.2, 0.7, 2.5, 0.8, n, seed);
    if (name == "S1") return make_preset(name, 0.2, 0.4, 0.7, 1.5, 0.8, n, seed);
    if (name == "S2") return make_preset(name, 0.2, 0.4, 0.7, 2.0, 0.8, n, seed);
    if (name == "S3") return make_preset(name, 0.6, 0.3, 0.7, 1.5, 0.8, n, seed);
    if (name == "S4") return make_preset(name, 0.6, 0.3, 0.5, 2.0, 0.8, n, seed);
    throw std::invalid_argument("unknown scenario preset: " + name);
}

std::string scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["theta"] = {{"alpha", s.theta.alpha}, {"beta", s.theta.beta}, {"delta", s.theta.delta}};
    j["phi"] = s.phi;
    j["m0"] = s.m0;
    j["v0"] = s.v0;
    j["m"] = s.m;
    j["v"] = s.v;
    j["n"] = s.n;
    j["ref_size"] = s.ref_size;
    j["seed"] = s.seed;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    const auto& t = j.at("theta");
    return Scenario(
        ThetaParam(t.at("alpha").get<double>(), t.at("beta").get<double>(),
                   t.value("delta", ThetaParam::kDefaultDelta)),
        j.at("phi").get<double>(), j.at("m0").get<double>(), j.at("v0").get<double>(),
        j.at("m").get<double>(), j.at("v").get<double>(), j.at("n").get<std::size_t>(),
        j.at("ref_size").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
        j.value("name", std::string{}));
}

Scenario load_scenario(const std::string& name_or_path) {
    for (const auto& preset : scenario_preset_names()) {
        if (name_or_path == preset) return scenario_preset(preset);
    }
    std::ifstream in(name_or_path);
    if (!in) {
        throw IoFailure("load_scenario: '" + name_or_path +
                        "' is neither a preset name nor a readable file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

std::vector<int> simulate_chain(const ThetaParam& theta, std::size_t n, RngStream& stream) {
    if (n < 1) throw std::invalid_argument("simulate_chain: n must be >= 1");
    const MixWeights w = mix_weights(theta);
    std::vector<int> x(n);
    x[0] = stream.uniform() < w.r ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double u = stream.uniform();
        x[i] = x[i - 1] == 0 ? (u < theta.alpha ? 1 : 0) : (u < theta.beta ? 0 : 1);
    }
    return x;
}

std::vector<double> simulate_ar1(double phi, double m0, double v0, std::size_t n,
                                 RngStream& stream) {
    const double mu0 = m0 / (1.0 - phi);
    const double sd0 = v0 / std::sqrt(1.0 - phi * phi);
    std::vector<double> y(n);
    y[0] = mu0 + sd0 * stream.normal();
    for (std::size_t k = 1; k < n; ++k) {
        y[k] = phi * y[k - 1] + m0 + v0 * stream.normal();
    }
    return y;
}

Trajectory simulate_observed(const Scenario& s) {
    RngStream chain_stream(s.seed, Stream::Chain);
    RngStream gold_stream(s.seed, Stream::Gold);
    RngStream poison_stream(s.seed, Stream::Poison);

    Trajectory t;
    t.x = simulate_chain(s.theta, s.n, chain_stream);
    const std::vector<double> gold = simulate_ar1(s.phi, s.m0, s.v0, s.n, gold_stream);
    t.z.resize(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        t.z[i] = t.x[i] == 0 ? gold[i] : s.m + s.v * poison_stream.normal();
    }
    return t;
}

ReferenceSample simulate_reference(const Scenario& s) {
    RngStream marginal_stream(s.seed, Stream::RefMarginal);
    RngStream pair_stream(s.seed, Stream::RefPair);

    const double mu0 = s.mu0();
    const double sd0 = std::sqrt(s.var0());
    ReferenceSample ref;
    ref.marginal.resize(s.ref_size);
    for (double& y : ref.marginal) y = mu0 + sd0 * marginal_stream.normal();
    ref.pair_first.resize(s.ref_size);
    ref.pair_second.resize(s.ref_size);
    for (std::size_t i = 0; i < s.ref_size; ++i) {
        ref.pair_first[i] = mu0 + sd0 * pair_stream.normal();
        ref.pair_second[i] = s.phi * ref.pair_first[i] + s.m0 + s.v0 * pair_stream.normal();
    }
    return ref;
}

}  // namespace chronomix
