#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chronomix/simulate.hpp"

namespace chronomix {

// Declarative Monte Carlo experiment: one scenario family swept over
// trajectory lengths, a repetition count, and the estimator methods to run.
// Every repetition derives its own seed from (master_seed, n, repetition),
// so results do not depend on scheduling.
struct ExperimentConfig {
    Scenario scenario;
    std::vector<std::size_t> n_values;
    std::size_t repetitions = 100;
    bool method_d = true;
    bool method_s = false;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
    std::size_t grid_cells = 64;
    bool clamp_f1 = false;
    std::string output_dir;

    void validate() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Per-repetition result for one estimator method.
struct RepRecord {
    bool failed = false;  // estimation refused (singular Gram block)
    std::optional<std::array<double, 2>> estimate;
    double f1_sup_error = 0.0;
    bool boundary_hit = false;
};

// Aggregate over repetitions for one (method, n) cell. Failed repetitions
// are excluded from the moments and counted separately.
struct CellStats {
    std::string method;
    std::size_t n = 0;
    std::size_t repetitions = 0;
    std::size_t failures = 0;
    std::size_t boundary_hits = 0;
    std::array<double, 2> bias{0, 0};
    std::array<double, 2> stddev{0, 0};
    // covariance of sqrt(n) * (estimate - sample mean): aa, ab, bb
    std::array<double, 3> cov_sqrtn{0, 0, 0};
    double f1_sup_median = 0.0;
    std::vector<RepRecord> records;  // one per repetition, in repetition order
};

CellStats aggregate_cell(const std::string& method, std::size_t n, const ThetaParam& truth,
                         std::vector<RepRecord> records);

// Curves kept for the functional panels: first kPanelReps repetitions of the
// smallest cells, plug-in estimate and observed-process ECDF with the truth.
struct CurvePanel {
    std::size_t n = 0;
    std::vector<double> grid_nodes;                // per kept rep, concatenated blocks
    std::vector<double> f1_hat, f1_true;
    std::vector<double> fhat, f_true;
    std::vector<std::size_t> rep_index;            // block boundaries: rep of each block
    std::size_t block_size = 0;                    // grid size per block
};

struct McReport {
    ExperimentConfig config;
    std::vector<CellStats> cells;     // ordered by (method, n)
    std::vector<CurvePanel> panels;   // one per n, for the first method run
    double wall_seconds = 0.0;
};

inline constexpr std::size_t kPanelReps = 10;

McReport run_montecarlo(const ExperimentConfig& config);

// Deterministic CSV writers: byte-identical output for identical reports.
void export_tables(const McReport& report, const std::string& dir);
void export_histogram_samples(const McReport& report, const std::string& dir);
void export_curves(const McReport& report, const std::string& dir);
void write_manifest(const McReport& report, const std::string& dir);

// Convenience: run + all exports into dir (created if absent).
void run_and_export(const ExperimentConfig& config, const std::string& dir);

}  // namespace chronomix
