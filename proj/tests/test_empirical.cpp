#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "chronomix/empirical.hpp"
#include "chronomix/errors.hpp"
#include "chronomix/rng.hpp"
#include "oracles.hpp"

using namespace chronomix;

TEST_CASE("ecdf1 counts") {
    const std::vector<double> sample{1.0, 2.0, 3.0};
    Grid grid;
    grid.nodes_x = {0.5, 2.0, 3.5};
    grid.nodes_y = grid.nodes_x;
    grid.lo = 0.5;
    grid.hi = 3.5;
    const CdfField f = ecdf1(sample, grid);
    CHECK(f.at(0) == 0.0);                              // below the minimum
    CHECK(f.at(1) == doctest::Approx(2.0 / 3.0));       // inclusive count at 2
    CHECK(f.at(2) == 1.0);                              // above the maximum

    CHECK_THROWS_AS(ecdf1(std::vector<double>{}, grid), EmptySample);
}

TEST_CASE("ecdf1 dkw-scale deviation on uniforms") {
    RngStream rng(2024);
    std::vector<double> u(100000);
    for (double& x : u) x = rng.uniform();
    const Grid grid = Grid::from_range(0.0, 1.0, 256);
    const CdfField f = ecdf1(u, grid);
    double sup = 0.0;
    for (std::size_t j = 0; j < grid.size_x(); ++j) {
        sup = std::max(sup, std::abs(f.at(j) - grid.nodes_x[j]));
    }
    CHECK(sup < 0.01);
}

TEST_CASE("ecdf1 matches naive counting") {
    RngStream rng(17);
    for (int instance = 0; instance < 25; ++instance) {
        const std::size_t n = 50 + static_cast<std::size_t>(rng.uniform() * 1950);
        std::vector<double> z(n);
        for (double& x : z) x = rng.normal() * 3.0 + rng.uniform();
        const Grid grid = Grid::from_data(z, 16 + (instance % 17));
        const CdfField f = ecdf1(z, grid);
        for (std::size_t j = 0; j < grid.size_x(); ++j) {
            CHECK(f.at(j) == oracles::ecdf1_naive(z, grid.nodes_x[j]));
        }
    }
}

TEST_CASE("ecdf2 single pair and errors") {
    const std::vector<double> series{1.0, 2.0};
    Grid grid;
    grid.nodes_x = {1.0, 2.0};
    grid.nodes_y = grid.nodes_x;
    grid.lo = 1.0;
    grid.hi = 2.0;
    const CdfField g = ecdf2_pairs(series, grid);
    CHECK(g.at(0, 1) == 1.0);  // (x, y) = (1, 2) covers the only pair
    CHECK(g.at(0, 0) == 0.0);

    CHECK_THROWS_AS(ecdf2_pairs(std::vector<double>{1.0}, grid), SeriesTooShort);
}

TEST_CASE("ecdf2 matches the naive double loop exactly") {
    RngStream rng(99);
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t n = 100 + static_cast<std::size_t>(rng.uniform() * 1900);
        std::vector<double> z(n);
        for (double& x : z) x = rng.normal();
        const std::size_t cells = 4 + static_cast<std::size_t>(rng.uniform() * 28);
        const Grid grid = Grid::from_data(z, cells);
        const CdfField g = ecdf2_pairs(z, grid);
        for (int probe = 0; probe < 10; ++probe) {
            const std::size_t i = static_cast<std::size_t>(rng.uniform() * cells);
            const std::size_t j = static_cast<std::size_t>(rng.uniform() * cells);
            CHECK(g.at(i, j) ==
                  oracles::ecdf2_pairs_naive(z, grid.nodes_x[i], grid.nodes_y[j]));
        }
    }
}

TEST_CASE("ecdf2 marginalization identity") {
    RngStream rng(7);
    std::vector<double> z(500);
    for (double& x : z) x = rng.normal();
    // extend the y axis far beyond the data so the last column marginalizes
    Grid grid = Grid::from_data(z, 32);
    grid.nodes_y.back() = 1e9;
    const CdfField g = ecdf2_pairs(z, grid);
    const CdfField f_head = ecdf1(std::span<const double>(z).first(z.size() - 1), grid);
    for (std::size_t i = 0; i < grid.size_x(); ++i) {
        CHECK(g.at(i, grid.size_y() - 1) == f_head.at(i));
    }
}

TEST_CASE("reference cdfs") {
    RngStream rng(31);
    const std::size_t n = 100000;
    std::vector<double> marginal(n), first(n), second(n);
    const double mu0 = 10.0 / 3.0, sd0 = std::sqrt(1.0 / 0.51), phi = 0.7;
    for (std::size_t i = 0; i < n; ++i) {
        marginal[i] = mu0 + sd0 * rng.normal();
        first[i] = mu0 + sd0 * rng.normal();
        second[i] = phi * first[i] + 1.0 + rng.normal();
    }
    const Grid grid = Grid::from_range(mu0 - 5.0 * sd0, mu0 + 5.0 * sd0, 64);
    const auto [f0, g0] = reference_cdfs(marginal, first, second, grid);

    // symmetry of the marginal at its mean
    std::size_t mid = 0;
    double best = 1e18;
    for (std::size_t j = 0; j < grid.size_x(); ++j) {
        if (std::abs(grid.nodes_x[j] - mu0) < best) {
            best = std::abs(grid.nodes_x[j] - mu0);
            mid = j;
        }
    }
    CHECK(std::abs(f0.at(mid) - gaussian_cdf(mu0, sd0 * sd0, grid.nodes_x[mid])) <= 0.005);

    // marginalization against a huge y column: the pair CDF collapses onto
    // the ECDF of its own first coordinates
    Grid wide = grid;
    wide.nodes_y.back() = 1e9;
    const auto [f0w, g0w] = reference_cdfs(marginal, first, second, wide);
    const CdfField first_ecdf = ecdf1(first, wide);
    for (std::size_t i = 0; i < wide.size_x(); ++i) {
        CHECK(g0w.at(i, wide.size_y() - 1) == first_ecdf.at(i));
    }
}

TEST_CASE("gaussian densities") {
    CHECK(gaussian_pdf1(0.0, 1.0, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_pdf1(0.0, -1.0, 0.0), InvalidVariance);
    CHECK_THROWS_AS(gaussian_pdf2(0.0, 0.0, 0.5, 0.0, 0.0), InvalidVariance);

    // zero correlation factorizes
    RngStream rng(3);
    for (int k = 0; k < 5; ++k) {
        const double x = 3.0 * rng.normal(), y = 3.0 * rng.normal();
        CHECK(std::abs(gaussian_pdf2(0.5, 2.0, 0.0, x, y) -
                       gaussian_pdf1(0.5, 2.0, x) * gaussian_pdf1(0.5, 2.0, y)) <= 1e-12);
    }

    // the correlated density integrates to 1 over a wide box
    const double mu = 1.0, var = 2.0, rho = 0.7;
    const double half = 8.0 * std::sqrt(var);
    const std::size_t steps = 400;
    const double hstep = 2.0 * half / steps;
    double mass = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        for (std::size_t j = 0; j < steps; ++j) {
            const double x = mu - half + (i + 0.5) * hstep;
            const double y = mu - half + (j + 0.5) * hstep;
            mass += gaussian_pdf2(mu, var, rho, x, y);
        }
    }
    mass *= hstep * hstep;
    CHECK(std::abs(mass - 1.0) <= 1e-4);
}

TEST_CASE("field csv export") {
    const Grid grid = Grid::from_range(0.0, 1.0, 4);
    const CdfField f = CdfField::make1(grid, {0.1, 0.4, 0.6, 1.0});
    write_field_csv(f, "test_field1.csv");
    {
        std::ifstream in("test_field1.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "x,value");
        std::size_t rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 4);
    }
    std::vector<double> vals(16);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) vals[i * 4 + j] = f.at(i) * f.at(j);
    }
    const CdfField g = CdfField::make2(grid, vals);
    write_field_csv(g, "test_field2.csv");
    {
        std::ifstream in("test_field2.csv");
        std::string line;
        std::getline(in, line);
        // header row carries the y nodes
        CHECK(line.substr(0, 2) == "x,");
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        std::size_t rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 4);
    }
    std::remove("test_field1.csv");
    std::remove("test_field2.csv");
}

TEST_CASE("cdf field invariants enforced") {
    Grid grid = Grid::from_range(0.0, 1.0, 4);
    CHECK_THROWS_AS(CdfField::make1(grid, {0.2, 0.1, 0.5, 1.0}), std::logic_error);
    CHECK_THROWS_AS(CdfField::make1(grid, {0.2, 0.4, 0.5, 1.2}), std::logic_error);
    CHECK_NOTHROW(CdfField::make1(grid, {0.2, 0.4, 0.5, 1.0}));
}
