#include "chronomix/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "chronomix/errors.hpp"
#include "chronomix/io.hpp"

namespace chronomix {

Grid Grid::from_range(double lo, double hi, std::size_t cells) {
    if (cells < 2) throw std::invalid_argument("Grid: need at least 2 cells");
    if (!(hi > lo)) throw std::invalid_argument("Grid: hi must exceed lo");
    Grid g;
    g.lo = lo;
    g.hi = hi;
    const double w = (hi - lo) / static_cast<double>(cells);
    g.nodes_x.resize(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        g.nodes_x[k] = lo + (static_cast<double>(k) + 0.5) * w;
    }
    g.nodes_y = g.nodes_x;
    return g;
}

Grid Grid::from_data(std::span<const double> z, std::size_t cells) {
    if (z.empty()) throw EmptySample("Grid::from_data: empty sample");
    auto [mn, mx] = std::minmax_element(z.begin(), z.end());
    double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        // constant series: open a token window so the grid stays valid
        lo -= 0.5;
        hi += 0.5;
    }
    return from_range(lo, hi, cells);
}

bool Grid::same_as(const Grid& other) const {
    return nodes_x == other.nodes_x && nodes_y == other.nodes_y;
}

namespace {

void check_cdf_values(const std::vector<double>& v, std::size_t gx, std::size_t gy, int arity) {
    for (double x : v) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::logic_error("CdfField: value outside [0, 1]");
        }
    }
    if (arity == 1) {
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] < v[i - 1]) throw std::logic_error("CdfField: not monotone");
        }
    } else {
        for (std::size_t i = 0; i < gx; ++i) {
            for (std::size_t j = 1; j < gy; ++j) {
                if (v[i * gy + j] < v[i * gy + j - 1]) {
                    throw std::logic_error("CdfField: not monotone in y");
                }
            }
        }
        for (std::size_t j = 0; j < gy; ++j) {
            for (std::size_t i = 1; i < gx; ++i) {
                if (v[i * gy + j] < v[(i - 1) * gy + j]) {
                    throw std::logic_error("CdfField: not monotone in x");
                }
            }
        }
    }
}

}  // namespace

CdfField CdfField::make1(Grid grid, std::vector<double> values) {
    if (values.size() != grid.size_x()) {
        throw std::invalid_argument("CdfField::make1: size mismatch");
    }
    check_cdf_values(values, grid.size_x(), 1, 1);
    return CdfField{std::move(grid), 1, std::move(values)};
}

CdfField CdfField::make2(Grid grid, std::vector<double> values) {
    if (values.size() != grid.size_x() * grid.size_y()) {
        throw std::invalid_argument("CdfField::make2: size mismatch");
    }
    check_cdf_values(values, grid.size_x(), grid.size_y(), 2);
    return CdfField{std::move(grid), 2, std::move(values)};
}

CdfField ecdf1(std::span<const double> sample, const Grid& grid) {
    if (sample.empty()) throw EmptySample("ecdf1: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t gx = grid.size_x();
    std::vector<double> values(gx);
    std::size_t ptr = 0;
    for (std::size_t j = 0; j < gx; ++j) {
        while (ptr < sorted.size() && sorted[ptr] <= grid.nodes_x[j]) ++ptr;
        values[j] = static_cast<double>(ptr) / static_cast<double>(sorted.size());
    }
    return CdfField::make1(grid, std::move(values));
}

namespace {

// Index of the first node >= u, i.e. the leftmost column where the point is
// counted; nodes.size() means "never counted".
std::size_t first_covering_node(const std::vector<double>& nodes, double u) {
    return static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), u) - nodes.begin());
}

CdfField dominance_cdf2(std::span<const double> first, std::span<const double> second,
                        const Grid& grid) {
    const std::size_t gx = grid.size_x(), gy = grid.size_y();
    const std::size_t m = first.size();
    std::vector<double> count(gx * gy, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = first_covering_node(grid.nodes_x, first[i]);
        const std::size_t b = first_covering_node(grid.nodes_y, second[i]);
        if (a < gx && b < gy) count[a * gy + b] += 1.0;
    }
    // 2-D prefix sum turns cell counts into dominance counts
    for (std::size_t i = 0; i < gx; ++i) {
        for (std::size_t j = 1; j < gy; ++j) count[i * gy + j] += count[i * gy + j - 1];
    }
    for (std::size_t i = 1; i < gx; ++i) {
        for (std::size_t j = 0; j < gy; ++j) count[i * gy + j] += count[(i - 1) * gy + j];
    }
    for (double& c : count) c /= static_cast<double>(m);
    return CdfField::make2(grid, std::move(count));
}

}  // namespace

CdfField ecdf2_pairs(std::span<const double> series, const Grid& grid) {
    if (series.size() < 2) throw SeriesTooShort("ecdf2_pairs: need at least 2 observations");
    return dominance_cdf2(series.first(series.size() - 1), series.subspan(1), grid);
}

CdfField ecdf2_rows(std::span<const double> first, std::span<const double> second,
                    const Grid& grid) {
    if (first.empty() || first.size() != second.size()) {
        throw EmptySample("ecdf2_rows: pair sample empty or ragged");
    }
    return dominance_cdf2(first, second, grid);
}

ReferenceCdfs reference_cdfs(std::span<const double> marginal_sample,
                             std::span<const double> pair_first,
                             std::span<const double> pair_second, const Grid& grid) {
    if (marginal_sample.empty()) throw EmptySample("reference_cdfs: empty marginal sample");
    return {ecdf1(marginal_sample, grid), ecdf2_rows(pair_first, pair_second, grid)};
}

double gaussian_cdf(double mu, double var, double x) {
    if (!(var > 0.0)) throw InvalidVariance("gaussian_cdf: var must be positive");
    return 0.5 * std::erfc(-(x - mu) / std::sqrt(2.0 * var));
}

CdfField analytic_marginal_cdf(double mu, double var, const Grid& grid) {
    std::vector<double> values(grid.size_x());
    for (std::size_t j = 0; j < values.size(); ++j) {
        values[j] = gaussian_cdf(mu, var, grid.nodes_x[j]);
    }
    return CdfField::make1(grid, std::move(values));
}

double gaussian_pdf1(double mu, double var, double x) {
    if (!(var > 0.0)) throw InvalidVariance("gaussian_pdf1: var must be positive");
    const double z = x - mu;
    return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double gaussian_pdf2(double mu, double var, double phi_corr, double x, double y) {
    if (!(var > 0.0)) throw InvalidVariance("gaussian_pdf2: var must be positive");
    if (!(std::abs(phi_corr) < 1.0)) {
        throw std::invalid_argument("gaussian_pdf2: |phi_corr| must be < 1");
    }
    const double rho = phi_corr;
    const double zx = (x - mu), zy = (y - mu);
    const double q = (zx * zx - 2.0 * rho * zx * zy + zy * zy) / (var * (1.0 - rho * rho));
    return std::exp(-0.5 * q) /
           (2.0 * std::numbers::pi * var * std::sqrt(1.0 - rho * rho));
}

void write_field_csv(const CdfField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("write_field_csv: cannot open " + path);
    if (field.arity == 1) {
        out << "x,value\n";
        for (std::size_t j = 0; j < field.grid.size_x(); ++j) {
            out << format_double(field.grid.nodes_x[j]) << ',' << format_double(field.at(j))
                << '\n';
        }
    } else {
        out << "x";
        for (double y : field.grid.nodes_y) out << ',' << format_double(y);
        out << '\n';
        for (std::size_t i = 0; i < field.grid.size_x(); ++i) {
            out << format_double(field.grid.nodes_x[i]);
            for (std::size_t j = 0; j < field.grid.size_y(); ++j) {
                out << ',' << format_double(field.at(i, j));
            }
            out << '\n';
        }
    }
    if (!out.good()) throw IoFailure("write_field_csv: write failed for " + path);
}

}  // namespace chronomix
