#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chronomix/contrast.hpp"
#include "chronomix/empirical.hpp"
#include "chronomix/model.hpp"
#include "chronomix/simulate.hpp"

namespace chronomix {

enum class SolverPath { ClosedForm, FallbackSearch };

struct DEstimate {
    ThetaParam theta;
    VParam v;
    double contrast;  // d_n at the estimate, from the direct field sum
    SolverPath path;
};

struct SEstimate {
    ThetaParam theta;
    double contrast;  // s_n at the estimate
};

// Integral-contrast estimator. The quadratic structure gives the candidate
// v in closed form (one 2x2 solve); it is accepted when it maps back into
// the theta box, otherwise a 9-start bounded simplex search over the box
// takes over. Throws SingularGram when the Gram block determinant is below
// 1e-14 (the two identification fields are numerically dependent).
DEstimate minimize_d(const TFields& fields, double delta = ThetaParam::kDefaultDelta);

// Sup-contrast estimator: 21x21 coarse scan of the box, then a bounded
// simplex polish from the best three scan points. Exact scan ties go to the
// lowest (alpha, beta) in lexicographic order.
SEstimate minimize_s(const TFields& fields, double delta = ThetaParam::kDefaultDelta);

// Plug-in inversion of the mixture identity on the grid:
//   F1(x) = (Fn(x) - p * F0(x)) / r,  p = beta/(alpha+beta), r = 1-p.
// With clamp set the raw curve is clipped to [0, 1] and made monotone by a
// running maximum; the raw version may exit [0, 1].
std::vector<double> plug_in_cdf(const ThetaParam& theta_hat, const CdfField& fhat,
                                const CdfField& f0, bool clamp = false);

// Kernel inversion of the mixture density: a Gaussian-kernel estimate of the
// observed density, minus the exact gold-standard density, rescaled.
struct KernelInversion {
    std::vector<double> f1;     // inverted density on the grid nodes
    std::vector<double> f_mix;  // kernel estimate of the observed density
    double bandwidth;
};
KernelInversion kernel_density_f1(const ThetaParam& theta_hat, std::span<const double> z,
                                  double gold_mu, double gold_var, const Grid& grid,
                                  std::optional<double> bandwidth = std::nullopt);

double silverman_bandwidth(std::span<const double> sample);

// One full estimation pass on a scenario: simulate, build the empirical and
// reference fields, run the requested estimators and the nonparametric
// inversions.
struct EstimateOptions {
    bool run_s = false;        // the integral estimator always runs
    bool clamp_f1 = false;
    bool analytic_f0 = false;  // exact Gaussian marginal instead of Monte Carlo F0
    std::size_t grid_cells = Grid::kDefaultCells;
    std::optional<double> bandwidth;
};

struct EstimationReport {
    ThetaParam theta_hat;
    std::optional<ThetaParam> theta_tilde;
    VParam v_hat;
    double contrast_at_min;
    SolverPath solver_path;
    double s_contrast_at_min = 0.0;

    std::vector<double> grid_nodes;
    std::vector<double> f1_curve;        // plug-in CDF from theta_hat
    std::vector<double> f1_curve_tilde;  // plug-in CDF from theta_tilde, when run
    std::vector<double> f1_density;      // kernel inversion from theta_hat
    std::vector<double> fhat_curve;      // empirical CDF of the observed series
    double bandwidth = 0.0;
    double elapsed_seconds = 0.0;
};

EstimationReport run_instance(const Scenario& scenario, const EstimateOptions& options = {});

}  // namespace chronomix
