#include "chronomix/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chronomix/errors.hpp"

namespace chronomix {

ThetaParam::ThetaParam(double alpha_, double beta_, double delta_)
    : alpha(alpha_), beta(beta_), delta(delta_) {
    if (!(delta > 0.0 && delta < 0.5)) {
        throw std::invalid_argument("ThetaParam: delta must lie in (0, 1/2), got " +
                                    std::to_string(delta));
    }
    // absorb float noise at the box faces before validating
    auto snap = [&](double x) {
        if (x < delta && x > delta - 1e-12) return delta;
        if (x > 1.0 - delta && x < 1.0 - delta + 1e-12) return 1.0 - delta;
        return x;
    };
    alpha = snap(alpha);
    beta = snap(beta);
    if (!(alpha >= delta && alpha <= 1.0 - delta) || !(beta >= delta && beta <= 1.0 - delta)) {
        throw std::invalid_argument("ThetaParam: (alpha, beta) = (" + std::to_string(alpha) +
                                    ", " + std::to_string(beta) + ") outside [" +
                                    std::to_string(delta) + ", " + std::to_string(1.0 - delta) +
                                    "]^2");
    }
}

Mat2 transition_matrix(const ThetaParam& theta) {
    return {1.0 - theta.alpha, theta.alpha, theta.beta, 1.0 - theta.beta};
}

MixWeights mix_weights(const ThetaParam& theta) {
    const double a = theta.alpha, b = theta.beta, s = theta.alpha + theta.beta;
    MixWeights w;
    w.p = b / s;
    w.r = a / s;
    w.lambda1 = b * (1.0 - a) / s;
    w.lambda2 = a * b / s;
    w.lambda3 = w.lambda2;
    w.lambda4 = a * (1.0 - b) / s;
    return w;
}

VParam h_map(const ThetaParam& theta) {
    const double a = theta.alpha, b = theta.beta, s = a + b;
    return {-b * (1.0 - a) / s, b * (s - 1.0) / a};
}

ThetaParam g_map(const VParam& v, double delta) {
    double radicand = v.v1 * v.v2 + v.v2 - v.v1;
    if (radicand < 0.0) {
        if (radicand > -1e-12) {
            radicand = 0.0;
        } else {
            throw NegativeRadicand("g_map: v1*v2 + v2 - v1 = " + std::to_string(radicand) +
                                   " < 0, v outside the valid image");
        }
    }
    const double beta = std::sqrt(radicand);
    const double denom = beta - v.v2;
    if (std::abs(denom) < 1e-12) {
        throw DegenerateDenominator("g_map: beta - v2 = " + std::to_string(denom) +
                                    " is numerically zero");
    }
    const double alpha = beta * (1.0 - beta) / denom;
    return ThetaParam(alpha, beta, delta);
}

Mat2 dh_jacobian(const ThetaParam& theta) {
    const double a = theta.alpha, b = theta.beta, s = a + b;
    return {(b * b + b) / (s * s), (a * a - a) / (s * s),
            (b - b * b) / (a * a), (a + 2.0 * b - 1.0) / a};
}

Mat2 dg_jacobian(const ThetaParam& theta) {
    const double a = theta.alpha, b = theta.beta, s = a + b;
    return {s * (a + 2.0 * b - 1.0) / (2.0 * b * b), a * a * (1.0 - a) / (2.0 * b * b * s),
            s * (b - 1.0) / (2.0 * a * b), a * (b + 1.0) / (2.0 * b * s)};
}

std::array<double, 2> c_coefficients(const ThetaParam& theta_star, const ThetaParam& theta) {
    const double r_star = theta_star.alpha / (theta_star.alpha + theta_star.beta);
    const double b_star = 1.0 - theta_star.beta;
    const double r = theta.alpha / (theta.alpha + theta.beta);
    const double b = 1.0 - theta.beta;
    const double c1 = -2.0 * r_star + r_star * b_star + 2.0 * r - r * b;
    const double c2 = (r_star / r) * (b_star * r - r_star * b);
    return {c1, c2};
}

}  // namespace chronomix
