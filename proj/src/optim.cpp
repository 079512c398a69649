#include "chronomix/optim.hpp"

#include <algorithm>
#include <cmath>

namespace chronomix {

namespace {

using Point = std::array<double, 2>;

double mirror_into(double x, double lo, double hi) {
    // Reflect across the violated face; repeat for far overshoots.
    const double width = hi - lo;
    while (x < lo || x > hi) {
        if (x < lo) x = lo + (lo - x);
        if (x > hi) x = hi - (x - hi);
        // Guard against pathological overshoot beyond 2*width
        if (x < lo - 2.0 * width || x > hi + 2.0 * width) {
            x = lo + 0.5 * width;
        }
    }
    return x;
}

Point mirror_point(Point p, const Point& lo, const Point& hi) {
    p[0] = mirror_into(p[0], lo[0], hi[0]);
    p[1] = mirror_into(p[1], lo[1], hi[1]);
    return p;
}

}  // namespace

NelderMeadResult nelder_mead_box(const std::function<double(Point)>& objective, Point lower,
                                 Point upper, Point start, const NelderMeadOptions& options) {
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

    std::array<Point, 3> simplex;
    simplex[0] = mirror_point(start, lower, upper);
    simplex[1] = mirror_point({start[0] + options.initial_step, start[1]}, lower, upper);
    simplex[2] = mirror_point({start[0], start[1] + options.initial_step}, lower, upper);
    std::array<double, 3> values;
    for (int i = 0; i < 3; ++i) values[i] = objective(simplex[i]);

    auto order = [&] {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
        std::array<Point, 3> s;
        std::array<double, 3> v;
        for (int i = 0; i < 3; ++i) {
            s[i] = simplex[idx[i]];
            v[i] = values[idx[i]];
        }
        simplex = s;
        values = v;
    };
    order();

    std::size_t iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        if (values[2] - values[0] <= options.tolerance) break;

        const Point centroid{0.5 * (simplex[0][0] + simplex[1][0]),
                             0.5 * (simplex[0][1] + simplex[1][1])};
        auto step_from_centroid = [&](double coef) {
            Point p{centroid[0] + coef * (centroid[0] - simplex[2][0]),
                    centroid[1] + coef * (centroid[1] - simplex[2][1])};
            return mirror_point(p, lower, upper);
        };

        const Point reflected = step_from_centroid(kReflect);
        const double f_reflected = objective(reflected);

        if (f_reflected < values[0]) {
            const Point expanded = step_from_centroid(kExpand);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                simplex[2] = expanded;
                values[2] = f_expanded;
            } else {
                simplex[2] = reflected;
                values[2] = f_reflected;
            }
        } else if (f_reflected < values[1]) {
            simplex[2] = reflected;
            values[2] = f_reflected;
        } else {
            const Point contracted = step_from_centroid(-kContract);
            const double f_contracted = objective(contracted);
            if (f_contracted < values[2]) {
                simplex[2] = contracted;
                values[2] = f_contracted;
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i][0] = simplex[0][0] + kShrink * (simplex[i][0] - simplex[0][0]);
                    simplex[i][1] = simplex[0][1] + kShrink * (simplex[i][1] - simplex[0][1]);
                    values[i] = objective(simplex[i]);
                }
            }
        }
        order();
    }
    return {simplex[0], values[0], iter};
}

}  // namespace chronomix
