#include "chronomix/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "chronomix/errors.hpp"
#include "chronomix/optim.hpp"

namespace chronomix {

namespace {

constexpr double kGramDetFloor = 1e-14;

bool inside_box(double x, double lo, double hi) { return x >= lo && x <= hi; }

// d_n over theta through the quadratic form; O(1) per candidate.
double quad_at_theta(const ContrastQuadratic& quad, double alpha, double beta, double delta) {
    return quad.eval(h_map(ThetaParam(alpha, beta, delta)));
}

DEstimate fallback_search(const ContrastQuadratic& quad, const TFields& fields, double delta) {
    const double lo = delta, hi = 1.0 - delta;
    auto objective = [&](std::array<double, 2> th) {
        return quad_at_theta(quad, th[0], th[1], delta);
    };
    std::array<double, 2> best{};
    double best_value = std::numeric_limits<double>::infinity();
    const double span = hi - lo;
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            const std::array<double, 2> start{lo + span * 0.25 * i, lo + span * 0.25 * j};
            const auto res = nelder_mead_box(
                objective, {lo, lo}, {hi, hi}, start,
                {.max_iterations = 400, .tolerance = 1e-14, .initial_step = span * 0.1});
            if (res.value < best_value) {
                best_value = res.value;
                best = res.x;
            }
        }
    }
    const ThetaParam theta(best[0], best[1], delta);
    return {theta, h_map(theta), d_n(h_map(theta), fields), SolverPath::FallbackSearch};
}

}  // namespace

DEstimate minimize_d(const TFields& fields, double delta) {
    const ContrastQuadratic quad = quadratic_form(fields);
    const double det = quad.gram_det();
    if (det < kGramDetFloor) {
        throw SingularGram("minimize_d: Gram determinant " + std::to_string(det) +
                           " below 1e-14; identification fields are linearly dependent");
    }
    // Stationary point of the quadratic: Gram * v = -b.
    const VParam v_hat{(-quad.b1 * quad.a22 + quad.b2 * quad.a12) / det,
                       (-quad.b2 * quad.a11 + quad.b1 * quad.a12) / det};
    try {
        const ThetaParam theta = g_map(v_hat, delta);
        if (inside_box(theta.alpha, delta, 1.0 - delta) &&
            inside_box(theta.beta, delta, 1.0 - delta)) {
            return {theta, v_hat, d_n(v_hat, fields), SolverPath::ClosedForm};
        }
    } catch (const NegativeRadicand&) {
    } catch (const DegenerateDenominator&) {
    } catch (const std::invalid_argument&) {
        // g_map produced a point outside the box (ThetaParam rejected it)
    }
    return fallback_search(quad, fields, delta);
}

SEstimate minimize_s(const TFields& fields, double delta) {
    const double lo = delta, hi = 1.0 - delta;
    constexpr std::size_t kCoarse = 21;
    const double step = (hi - lo) / static_cast<double>(kCoarse - 1);

    struct Candidate {
        double alpha, beta, value;
    };
    std::vector<Candidate> scan;
    scan.reserve(kCoarse * kCoarse);
    for (std::size_t i = 0; i < kCoarse; ++i) {
        for (std::size_t j = 0; j < kCoarse; ++j) {
            const double a = lo + step * static_cast<double>(i);
            const double b = lo + step * static_cast<double>(j);
            scan.push_back({a, b, s_n(h_map(ThetaParam(a, b, delta)), fields)});
        }
    }
    // stable partial order: value, then alpha, then beta
    std::sort(scan.begin(), scan.end(), [](const Candidate& x, const Candidate& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.alpha != y.alpha) return x.alpha < y.alpha;
        return x.beta < y.beta;
    });

    auto objective = [&](std::array<double, 2> th) {
        return s_n(h_map(ThetaParam(th[0], th[1], delta)), fields);
    };
    Candidate best = scan.front();
    for (std::size_t k = 0; k < 3 && k < scan.size(); ++k) {
        const auto res =
            nelder_mead_box(objective, {lo, lo}, {hi, hi}, {scan[k].alpha, scan[k].beta},
                            {.max_iterations = 200, .tolerance = 1e-10, .initial_step = step});
        if (res.value < best.value) best = {res.x[0], res.x[1], res.value};
    }
    return {ThetaParam(best.alpha, best.beta, delta), best.value};
}

std::vector<double> plug_in_cdf(const ThetaParam& theta_hat, const CdfField& fhat,
                                const CdfField& f0, bool clamp) {
    if (!fhat.grid.same_as(f0.grid)) throw GridMismatch("plug_in_cdf: grids differ");
    const MixWeights w = mix_weights(theta_hat);
    std::vector<double> out(fhat.values.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (fhat.at(j) - w.p * f0.at(j)) / w.r;
    }
    if (clamp) {
        double running = 0.0;
        for (double& x : out) {
            running = std::max(running, std::clamp(x, 0.0, 1.0));
            x = running;
        }
    }
    return out;
}

double silverman_bandwidth(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < 2) throw InvalidBandwidth("silverman_bandwidth: need at least 2 points");
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : sample) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(n - 1);
        const std::size_t k = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(k);
        return k + 1 < n ? sorted[k] * (1.0 - frac) + sorted[k + 1] * frac : sorted[k];
    };
    const double iqr = quantile(0.75) - quantile(0.25);

    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) throw InvalidBandwidth("silverman_bandwidth: degenerate sample");
    return h;
}

KernelInversion kernel_density_f1(const ThetaParam& theta_hat, std::span<const double> z,
                                  double gold_mu, double gold_var, const Grid& grid,
                                  std::optional<double> bandwidth) {
    if (z.size() < 2) throw SeriesTooShort("kernel_density_f1: need at least 2 observations");
    double h;
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) throw InvalidBandwidth("kernel_density_f1: bandwidth <= 0");
        h = *bandwidth;
    } else {
        h = silverman_bandwidth(z);
    }
    const MixWeights w = mix_weights(theta_hat);
    const double norm = 1.0 / (static_cast<double>(z.size()) * h * std::sqrt(2.0 * std::numbers::pi));

    KernelInversion out;
    out.bandwidth = h;
    out.f_mix.resize(grid.size_x());
    out.f1.resize(grid.size_x());
    for (std::size_t j = 0; j < grid.size_x(); ++j) {
        const double x = grid.nodes_x[j];
        double acc = 0.0;
        for (double zi : z) {
            const double u = (x - zi) / h;
            acc += std::exp(-0.5 * u * u);
        }
        out.f_mix[j] = norm * acc;
        out.f1[j] = (out.f_mix[j] - w.p * gaussian_pdf1(gold_mu, gold_var, x)) / w.r;
    }
    return out;
}

EstimationReport run_instance(const Scenario& scenario, const EstimateOptions& options) {
    const auto t_start = std::chrono::steady_clock::now();

    const Trajectory traj = simulate_observed(scenario);
    const ReferenceSample ref = simulate_reference(scenario);
    const Grid grid = Grid::from_data(traj.z, options.grid_cells);

    const CdfField fhat = ecdf1(traj.z, grid);
    const CdfField ghat = ecdf2_pairs(traj.z, grid);
    CdfField f0 = options.analytic_f0
                      ? analytic_marginal_cdf(scenario.mu0(), scenario.var0(), grid)
                      : ecdf1(ref.marginal, grid);
    const CdfField g0 = ecdf2_rows(ref.pair_first, ref.pair_second, grid);
    const TFields fields = t_fields(fhat, ghat, f0, g0);

    const DEstimate d_est = minimize_d(fields, scenario.theta.delta);

    EstimationReport report{.theta_hat = d_est.theta,
                            .theta_tilde = std::nullopt,
                            .v_hat = d_est.v,
                            .contrast_at_min = d_est.contrast,
                            .solver_path = d_est.path};
    if (options.run_s) {
        const SEstimate s_est = minimize_s(fields, scenario.theta.delta);
        report.theta_tilde = s_est.theta;
        report.s_contrast_at_min = s_est.contrast;
        report.f1_curve_tilde = plug_in_cdf(*report.theta_tilde, fhat, f0, options.clamp_f1);
    }

    report.grid_nodes = grid.nodes_x;
    report.f1_curve = plug_in_cdf(report.theta_hat, fhat, f0, options.clamp_f1);
    const KernelInversion inv = kernel_density_f1(report.theta_hat, traj.z, scenario.mu0(),
                                                  scenario.var0(), grid, options.bandwidth);
    report.f1_density = inv.f1;
    report.bandwidth = inv.bandwidth;
    report.fhat_curve = fhat.values;

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace chronomix
