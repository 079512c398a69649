#include "chronomix/decode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chronomix/empirical.hpp"

namespace chronomix {

double SampledDensity::at(double x) const {
    if (nodes.empty() || x < nodes.front() || x > nodes.back()) return 0.0;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t hi = std::min<std::size_t>(it - nodes.begin(), nodes.size() - 1);
    if (hi == 0) return std::max(values[0], 0.0);
    const std::size_t lo = hi - 1;
    const double t = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
    const double v = values[lo] * (1.0 - t) + values[hi] * t;
    return std::max(v, 0.0);
}

std::optional<PairPosterior> pair_posterior(const ThetaParam& theta, const SampledDensity& f1,
                                            const GoldPairLaw& gold, double z, double zprime) {
    const MixWeights w = mix_weights(theta);
    const double f0_z = gaussian_pdf1(gold.mu0, gold.var0, z);
    const double f0_zp = gaussian_pdf1(gold.mu0, gold.var0, zprime);
    const double g0 = gaussian_pdf2(gold.mu0, gold.var0, gold.phi, z, zprime);
    const double f_z = f1.at(z);
    const double f_zp = f1.at(zprime);

    const std::array<double, 4> eta{w.lambda1 * g0, w.lambda2 * f0_z * f_zp,
                                    w.lambda3 * f_z * f0_zp, w.lambda4 * f_z * f_zp};
    const double total = eta[0] + eta[1] + eta[2] + eta[3];
    if (!(total > 0.0)) return std::nullopt;

    PairPosterior post{};
    int best = 0;
    for (int i = 0; i < 4; ++i) {
        post.probs[i] = eta[i] / total;
        if (post.probs[i] > post.probs[best]) best = i;
    }
    post.map_k = best >> 1;
    post.map_l = best & 1;
    return post;
}

std::vector<DecodedPair> decode_series(const ThetaParam& theta, const SampledDensity& f1,
                                       const GoldPairLaw& gold, std::span<const double> z,
                                       int offset) {
    if (offset != 0 && offset != 1) throw std::invalid_argument("decode_series: offset is 0 or 1");
    std::vector<DecodedPair> out;
    for (std::size_t i = static_cast<std::size_t>(offset); i + 1 < z.size(); i += 2) {
        out.push_back({i, pair_posterior(theta, f1, gold, z[i], z[i + 1])});
    }
    return out;
}

}  // namespace chronomix
