#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace chronomix {

// Evaluation grid shared by every field of one estimation problem. Nodes are
// midpoints of equal cells over [lo, hi], so averaging a field over all
// nodes is the quadrature rule for the uniform product weight.
struct Grid {
    std::vector<double> nodes_x;
    std::vector<double> nodes_y;
    double lo = 0.0;
    double hi = 0.0;

    static constexpr std::size_t kDefaultCells = 64;

    static Grid from_range(double lo, double hi, std::size_t cells = kDefaultCells);
    static Grid from_data(std::span<const double> z, std::size_t cells = kDefaultCells);

    std::size_t size_x() const { return nodes_x.size(); }
    std::size_t size_y() const { return nodes_y.size(); }

    bool same_as(const Grid& other) const;
};

// A CDF sampled on the grid: monotone along each axis, entries in [0, 1].
// Both invariants are checked on construction.
struct CdfField {
    Grid grid;
    int arity = 1;                // 1 or 2
    std::vector<double> values;   // length G, or G*G row-major (x index major)

    double at(std::size_t ix) const { return values[ix]; }
    double at(std::size_t ix, std::size_t iy) const { return values[ix * grid.size_y() + iy]; }

    static CdfField make1(Grid grid, std::vector<double> values);
    static CdfField make2(Grid grid, std::vector<double> values);
};

// Empirical CDF of a sample: value at node x is #{i : z_i <= x} / n.
CdfField ecdf1(std::span<const double> sample, const Grid& grid);

// Second-order empirical CDF of a series, evaluated on the full grid:
// value at (x, y) = #{i <= n-1 : z_i <= x, z_{i+1} <= y} / (n-1).
// Computed by binning each pair once and accumulating a 2-D prefix sum, so
// the cost is O(n log G + G^2) instead of O(n G^2).
CdfField ecdf2_pairs(std::span<const double> series, const Grid& grid);

// Same dominance counting for an i.i.d. pair sample (rows, not consecutive
// entries); divisor is the number of pairs.
CdfField ecdf2_rows(std::span<const double> first, std::span<const double> second,
                    const Grid& grid);

// Monte Carlo reference CDFs of the gold-standard process on the grid.
struct ReferenceCdfs {
    CdfField f0;
    CdfField g0;
};
ReferenceCdfs reference_cdfs(std::span<const double> marginal_sample,
                             std::span<const double> pair_first,
                             std::span<const double> pair_second, const Grid& grid);

// Exact Gaussian marginal CDF sampled on the grid (alternative to the Monte
// Carlo F0 when the gold standard is Gaussian).
CdfField analytic_marginal_cdf(double mu, double var, const Grid& grid);

double gaussian_cdf(double mu, double var, double x);
double gaussian_pdf1(double mu, double var, double x);

// Bivariate normal density with equal marginals N(mu, var) and correlation
// phi_corr (the stationary consecutive-pair law of a Gaussian AR(1) path).
double gaussian_pdf2(double mu, double var, double phi_corr, double x, double y);

// CSV export: 1-D fields as (x, value) rows; 2-D fields as a matrix whose
// header row carries the y nodes and whose first column carries the x nodes.
void write_field_csv(const CdfField& field, const std::string& path);

}  // namespace chronomix
