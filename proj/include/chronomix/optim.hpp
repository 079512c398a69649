#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace chronomix {

// 2-D Nelder-Mead simplex search on a box. Trial points that leave the box
// are mirrored back across the violated face, so every evaluation stays
// feasible without flattening the objective at the boundary.
struct NelderMeadResult {
    std::array<double, 2> x;
    double value;
    std::size_t iterations;
};

struct NelderMeadOptions {
    std::size_t max_iterations = 200;
    double tolerance = 1e-8;      // simplex value-spread stopping rule
    double initial_step = 0.05;   // edge length of the starting simplex
};

NelderMeadResult nelder_mead_box(const std::function<double(std::array<double, 2>)>& objective,
                                 std::array<double, 2> lower, std::array<double, 2> upper,
                                 std::array<double, 2> start,
                                 const NelderMeadOptions& options = {});

}  // namespace chronomix
