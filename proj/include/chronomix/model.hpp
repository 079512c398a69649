#pragma once

#include <array>

namespace chronomix {

// Transition parameters (alpha, beta) of the latent 2-state chain, confined
// to the box [delta, 1-delta]^2 with 0 < delta < 1/2.
struct ThetaParam {
    double alpha;
    double beta;
    double delta;

    ThetaParam(double alpha_, double beta_, double delta_ = kDefaultDelta);

    static constexpr double kDefaultDelta = 0.05;
};

// Stationary mass of each state plus the four consecutive-pair pattern
// weights lambda_{00}, lambda_{01}, lambda_{10}, lambda_{11}.
struct MixWeights {
    double p;        // stationary mass of state 0 (gold standard)
    double r;        // stationary mass of state 1 (poisoned)
    double lambda1;  // pair (0,0)
    double lambda2;  // pair (0,1)
    double lambda3;  // pair (1,0), equals lambda2
    double lambda4;  // pair (1,1)
};

// Coordinates in which the integral contrast is an exact quadratic.
struct VParam {
    double v1;
    double v2;
};

struct Mat2 {
    double m00, m01, m10, m11;

    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

// Row-stochastic transition matrix [[1-alpha, alpha], [beta, 1-beta]].
Mat2 transition_matrix(const ThetaParam& theta);

// Stationary law p = beta/(alpha+beta), r = alpha/(alpha+beta) and the
// pair-pattern weights.
MixWeights mix_weights(const ThetaParam& theta);

// Reparametrization theta -> v:
//   v1 = -beta(1-alpha)/(alpha+beta),  v2 = beta(alpha+beta-1)/alpha.
VParam h_map(const ThetaParam& theta);

// Inverse map v -> theta: beta = sqrt(v1*v2 + v2 - v1),
// alpha = beta(1-beta)/(beta - v2). Throws NegativeRadicand or
// DegenerateDenominator when v is outside the valid image; a radicand in
// (-1e-12, 0) is treated as float noise and clamped to 0.
ThetaParam g_map(const VParam& v, double delta = ThetaParam::kDefaultDelta);

// Jacobian of h at theta, closed form.
Mat2 dh_jacobian(const ThetaParam& theta);

// Jacobian of g evaluated at h(theta), closed form; dg_jacobian(theta) *
// dh_jacobian(theta) is the identity.
Mat2 dg_jacobian(const ThetaParam& theta);

// Deviation coefficients: with r = alpha/(alpha+beta) and b = 1-beta,
//   c1 = -2 r* + r* b* + 2 r - r b,   c2 = (r*/r)(b* r - r* b).
// Both vanish exactly when theta == theta_star, and only then.
std::array<double, 2> c_coefficients(const ThetaParam& theta_star, const ThetaParam& theta);

}  // namespace chronomix
