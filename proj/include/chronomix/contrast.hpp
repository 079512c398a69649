#pragma once

#include <vector>

#include "chronomix/empirical.hpp"
#include "chronomix/model.hpp"

namespace chronomix {

// The three building blocks that make the integral contrast quadratic in the
// v coordinates:
//   t1    = G0 - F0 (x) F0          gold-standard time-dependence signal
//   t2hat = (Fn - F0) (x) (Fn - F0) source-separation signal
//   t3hat = Gn - Fn (x) Fn          observed time-dependence signal
// All three live on one grid; entries are differences of CDF products and
// stay in [-1, 1].
struct TFields {
    Grid grid;
    std::vector<double> t1;
    std::vector<double> t2hat;
    std::vector<double> t3hat;

    std::size_t cells() const { return t1.size(); }
};

TFields t_fields(const CdfField& fhat, const CdfField& ghat, const CdfField& f0,
                 const CdfField& g0);

// Pointwise deviation field delta(v) = v1*t1 + v2*t2hat + t3hat.
std::vector<double> delta_n(const VParam& v, const TFields& fields);

// Integral contrast: mean of delta^2 over the grid (uniform product weight).
double d_n(const VParam& v, const TFields& fields);

// Sup contrast: max |delta| over the grid.
double s_n(const VParam& v, const TFields& fields);

// Exact quadratic representation of d_n in v:
//   d_n(v) = a11 v1^2 + 2 a12 v1 v2 + a22 v2^2 + 2 b1 v1 + 2 b2 v2 + c0,
// where each coefficient is a grid-mean inner product of two T-fields. The
// Gram block [[a11, a12], [a12, a22]] is symmetric PSD by construction and
// the Hessian of d_n is twice that block.
struct ContrastQuadratic {
    double a11, a12, a22;
    double b1, b2;
    double c0;

    double eval(const VParam& v) const {
        return a11 * v.v1 * v.v1 + 2.0 * a12 * v.v1 * v.v2 + a22 * v.v2 * v.v2 +
               2.0 * b1 * v.v1 + 2.0 * b2 * v.v2 + c0;
    }
    double gram_det() const { return a11 * a22 - a12 * a12; }
};

ContrastQuadratic quadratic_form(const TFields& fields);

}  // namespace chronomix
