#include "chronomix/contrast.hpp"

#include <algorithm>
#include <cmath>

#include "chronomix/errors.hpp"

namespace chronomix {

TFields t_fields(const CdfField& fhat, const CdfField& ghat, const CdfField& f0,
                 const CdfField& g0) {
    if (!fhat.grid.same_as(ghat.grid) || !fhat.grid.same_as(f0.grid) ||
        !fhat.grid.same_as(g0.grid)) {
        throw GridMismatch("t_fields: all fields must share one grid");
    }
    if (fhat.grid.nodes_x != fhat.grid.nodes_y) {
        throw GridMismatch("t_fields: marginal fields require nodes_x == nodes_y");
    }
    const std::size_t gx = fhat.grid.size_x(), gy = fhat.grid.size_y();
    TFields out;
    out.grid = fhat.grid;
    out.t1.resize(gx * gy);
    out.t2hat.resize(gx * gy);
    out.t3hat.resize(gx * gy);
    for (std::size_t i = 0; i < gx; ++i) {
        const double f0x = f0.at(i), fhx = fhat.at(i);
        for (std::size_t j = 0; j < gy; ++j) {
            const std::size_t k = i * gy + j;
            out.t1[k] = g0.at(i, j) - f0x * f0.at(j);
            out.t2hat[k] = (fhx - f0x) * (fhat.at(j) - f0.at(j));
            out.t3hat[k] = ghat.at(i, j) - fhx * fhat.at(j);
        }
    }
    return out;
}

std::vector<double> delta_n(const VParam& v, const TFields& fields) {
    std::vector<double> out(fields.cells());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = v.v1 * fields.t1[k] + v.v2 * fields.t2hat[k] + fields.t3hat[k];
    }
    return out;
}

double d_n(const VParam& v, const TFields& fields) {
    double acc = 0.0;
    for (std::size_t k = 0; k < fields.cells(); ++k) {
        const double d = v.v1 * fields.t1[k] + v.v2 * fields.t2hat[k] + fields.t3hat[k];
        acc += d * d;
    }
    return acc / static_cast<double>(fields.cells());
}

double s_n(const VParam& v, const TFields& fields) {
    double sup = 0.0;
    for (std::size_t k = 0; k < fields.cells(); ++k) {
        const double d = v.v1 * fields.t1[k] + v.v2 * fields.t2hat[k] + fields.t3hat[k];
        sup = std::max(sup, std::abs(d));
    }
    return sup;
}

ContrastQuadratic quadratic_form(const TFields& fields) {
    ContrastQuadratic q{0, 0, 0, 0, 0, 0};
    for (std::size_t k = 0; k < fields.cells(); ++k) {
        const double t1 = fields.t1[k], t2 = fields.t2hat[k], t3 = fields.t3hat[k];
        q.a11 += t1 * t1;
        q.a12 += t1 * t2;
        q.a22 += t2 * t2;
        q.b1 += t1 * t3;
        q.b2 += t2 * t3;
        q.c0 += t3 * t3;
    }
    const double inv = 1.0 / static_cast<double>(fields.cells());
    q.a11 *= inv;
    q.a12 *= inv;
    q.a22 *= inv;
    q.b1 *= inv;
    q.b2 *= inv;
    q.c0 *= inv;
    return q;
}

}  // namespace chronomix
