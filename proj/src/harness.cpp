#include "chronomix/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chronomix/contrast.hpp"
#include "chronomix/empirical.hpp"
#include "chronomix/errors.hpp"
#include "chronomix/estimate.hpp"
#include "chronomix/io.hpp"

namespace chronomix {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kBoundaryEps = 1e-9;

// Compensated accumulator: the reduction must not depend on how work was
// scheduled, and must not lose digits when repetitions grow.
struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool hits_boundary(const ThetaParam& t) {
    const double lo = t.delta, hi = 1.0 - t.delta;
    return std::abs(t.alpha - lo) < kBoundaryEps || std::abs(t.alpha - hi) < kBoundaryEps ||
           std::abs(t.beta - lo) < kBoundaryEps || std::abs(t.beta - hi) < kBoundaryEps;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw std::invalid_argument("ExperimentConfig: repetitions >= 1");
    if (n_values.empty()) throw std::invalid_argument("ExperimentConfig: n_values nonempty");
    for (std::size_t n : n_values) {
        if (n < 100) throw std::invalid_argument("ExperimentConfig: each n must be >= 100");
    }
    if (!method_d && !method_s) {
        throw std::invalid_argument("ExperimentConfig: at least one method");
    }
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers >= 1");
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["scenario"] = nlohmann::json::parse(scenario_to_json(c.scenario));
    j["n_values"] = c.n_values;
    j["repetitions"] = c.repetitions;
    std::vector<std::string> methods;
    if (c.method_d) methods.push_back("d");
    if (c.method_s) methods.push_back("s");
    j["methods"] = methods;
    j["workers"] = c.workers;
    j["master_seed"] = c.master_seed;
    j["grid_cells"] = c.grid_cells;
    j["clamp_f1"] = c.clamp_f1;
    j["output_dir"] = c.output_dir;
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    Scenario scenario = j.at("scenario").is_string()
                            ? load_scenario(j.at("scenario").get<std::string>())
                            : scenario_from_json(j.at("scenario").dump());
    ExperimentConfig c{std::move(scenario)};
    c.n_values = j.at("n_values").get<std::vector<std::size_t>>();
    c.repetitions = j.at("repetitions").get<std::size_t>();
    c.method_d = false;
    c.method_s = false;
    for (const auto& m : j.at("methods")) {
        if (m == "d") c.method_d = true;
        else if (m == "s") c.method_s = true;
        else throw std::invalid_argument("ExperimentConfig: unknown method " + m.dump());
    }
    c.workers = j.value("workers", std::size_t{1});
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.grid_cells = j.value("grid_cells", std::size_t{64});
    c.clamp_f1 = j.value("clamp_f1", false);
    c.output_dir = j.value("output_dir", std::string{});
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("load_config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

CellStats aggregate_cell(const std::string& method, std::size_t n, const ThetaParam& truth,
                         std::vector<RepRecord> records) {
    CellStats cell;
    cell.method = method;
    cell.n = n;
    cell.repetitions = records.size();

    Kahan sum_a, sum_b;
    std::size_t ok = 0;
    for (const RepRecord& r : records) {
        if (r.failed || !r.estimate) {
            ++cell.failures;
            continue;
        }
        ++ok;
        sum_a.add((*r.estimate)[0]);
        sum_b.add((*r.estimate)[1]);
        if (r.boundary_hit) ++cell.boundary_hits;
    }
    if (ok > 0) {
        const double mean_a = sum_a.sum / static_cast<double>(ok);
        const double mean_b = sum_b.sum / static_cast<double>(ok);
        cell.bias = {mean_a - truth.alpha, mean_b - truth.beta};
        if (ok > 1) {
            Kahan saa, sbb, sab;
            for (const RepRecord& r : records) {
                if (r.failed || !r.estimate) continue;
                const double da = (*r.estimate)[0] - mean_a;
                const double db = (*r.estimate)[1] - mean_b;
                saa.add(da * da);
                sbb.add(db * db);
                sab.add(da * db);
            }
            const double denom = static_cast<double>(ok - 1);
            cell.stddev = {std::sqrt(saa.sum / denom), std::sqrt(sbb.sum / denom)};
            const double nn = static_cast<double>(n);
            cell.cov_sqrtn = {nn * saa.sum / denom, nn * sab.sum / denom, nn * sbb.sum / denom};
        }
    }
    std::vector<double> sups;
    for (const RepRecord& r : records) {
        if (!r.failed && r.estimate) sups.push_back(r.f1_sup_error);
    }
    cell.f1_sup_median = median_of(std::move(sups));
    cell.records = std::move(records);
    return cell;
}

namespace {

struct RepWork {
    RepRecord d;
    RepRecord s;
    // panel payload (only filled for the first kPanelReps repetitions)
    std::vector<double> grid_nodes, f1_hat, f1_true, fhat, f_true;
};

RepWork run_repetition(const ExperimentConfig& cfg, std::size_t n, std::uint64_t rep_seed,
                       bool keep_curves) {
    const Scenario scen = cfg.scenario.with_n(n).with_seed(rep_seed);
    RepWork out;

    const Trajectory traj = simulate_observed(scen);
    const ReferenceSample ref = simulate_reference(scen);
    const Grid grid = Grid::from_data(traj.z, cfg.grid_cells);
    const CdfField fhat = ecdf1(traj.z, grid);
    const CdfField ghat = ecdf2_pairs(traj.z, grid);
    const CdfField f0 = ecdf1(ref.marginal, grid);
    const CdfField g0 = ecdf2_rows(ref.pair_first, ref.pair_second, grid);
    const TFields fields = t_fields(fhat, ghat, f0, g0);

    // true poisoning CDF on this grid, for the functional error
    std::vector<double> f1_true(grid.size_x());
    for (std::size_t j = 0; j < f1_true.size(); ++j) {
        f1_true[j] = gaussian_cdf(scen.m, scen.v * scen.v, grid.nodes_x[j]);
    }
    auto sup_error = [&](const std::vector<double>& curve) {
        double sup = 0.0;
        for (std::size_t j = 0; j < curve.size(); ++j) {
            sup = std::max(sup, std::abs(curve[j] - f1_true[j]));
        }
        return sup;
    };

    std::vector<double> panel_curve;
    if (cfg.method_d) {
        try {
            const DEstimate est = minimize_d(fields, scen.theta.delta);
            out.d.estimate = {est.theta.alpha, est.theta.beta};
            out.d.boundary_hit = hits_boundary(est.theta);
            const auto curve = plug_in_cdf(est.theta, fhat, f0, cfg.clamp_f1);
            out.d.f1_sup_error = sup_error(curve);
            panel_curve = curve;
        } catch (const SingularGram&) {
            out.d.failed = true;
        }
    }
    if (cfg.method_s) {
        const SEstimate est = minimize_s(fields, scen.theta.delta);
        out.s.estimate = {est.theta.alpha, est.theta.beta};
        out.s.boundary_hit = hits_boundary(est.theta);
        const auto curve = plug_in_cdf(est.theta, fhat, f0, cfg.clamp_f1);
        out.s.f1_sup_error = sup_error(curve);
        if (panel_curve.empty()) panel_curve = curve;
    }

    if (keep_curves && !panel_curve.empty()) {
        const MixWeights w_true = mix_weights(scen.theta);
        out.grid_nodes = grid.nodes_x;
        out.f1_hat = std::move(panel_curve);
        out.f1_true = std::move(f1_true);
        out.fhat = fhat.values;
        out.f_true.resize(grid.size_x());
        for (std::size_t j = 0; j < grid.size_x(); ++j) {
            const double f0x = gaussian_cdf(scen.mu0(), scen.var0(), grid.nodes_x[j]);
            out.f_true[j] = w_true.p * f0x + w_true.r * out.f1_true[j];
        }
    }
    return out;
}

}  // namespace

McReport run_montecarlo(const ExperimentConfig& config) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();

    McReport report{config};

    for (std::size_t n : config.n_values) {
        const std::uint64_t cell_seed = derive_seed(config.master_seed, n);
        std::vector<RepWork> work(config.repetitions);

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= config.repetitions) break;
                const std::uint64_t rep_seed = derive_seed(cell_seed, i + 1);
                work[i] = run_repetition(config, n, rep_seed, i < kPanelReps);
            }
        };
        const std::size_t thread_count = std::min(config.workers, config.repetitions);
        if (thread_count <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(thread_count);
            for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        if (config.method_d) {
            std::vector<RepRecord> records;
            records.reserve(config.repetitions);
            for (const RepWork& w : work) records.push_back(w.d);
            report.cells.push_back(
                aggregate_cell("d", n, config.scenario.theta, std::move(records)));
        }
        if (config.method_s) {
            std::vector<RepRecord> records;
            records.reserve(config.repetitions);
            for (const RepWork& w : work) records.push_back(w.s);
            report.cells.push_back(
                aggregate_cell("s", n, config.scenario.theta, std::move(records)));
        }

        CurvePanel panel;
        panel.n = n;
        for (std::size_t i = 0; i < config.repetitions && i < kPanelReps; ++i) {
            const RepWork& w = work[i];
            if (w.grid_nodes.empty()) continue;
            panel.block_size = w.grid_nodes.size();
            panel.rep_index.push_back(i);
            panel.grid_nodes.insert(panel.grid_nodes.end(), w.grid_nodes.begin(),
                                    w.grid_nodes.end());
            panel.f1_hat.insert(panel.f1_hat.end(), w.f1_hat.begin(), w.f1_hat.end());
            panel.f1_true.insert(panel.f1_true.end(), w.f1_true.begin(), w.f1_true.end());
            panel.fhat.insert(panel.fhat.end(), w.fhat.begin(), w.fhat.end());
            panel.f_true.insert(panel.f_true.end(), w.f_true.begin(), w.f_true.end());
        }
        report.panels.push_back(std::move(panel));
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

namespace {

std::string scenario_tag(const ExperimentConfig& c) {
    return c.scenario.name.empty() ? "custom" : c.scenario.name;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoFailure("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace

void export_tables(const McReport& report, const std::string& dir) {
    ensure_dir(dir);
    const std::string tag = scenario_tag(report.config);
    for (const char* method : {"d", "s"}) {
        std::ostringstream table, cov;
        table << "scenario,method,n,repetitions,failures,boundary_hits,"
                 "bias_alpha,std_alpha,bias_beta,std_beta,f1_sup_median\n";
        cov << "n,cov_alpha_alpha,cov_alpha_beta,cov_beta_beta,repetitions_used,boundary_hits\n";
        bool any = false;
        for (const CellStats& c : report.cells) {
            if (c.method != method) continue;
            any = true;
            table << tag << ',' << c.method << ',' << c.n << ',' << c.repetitions << ','
                  << c.failures << ',' << c.boundary_hits << ',' << format_double(c.bias[0])
                  << ',' << format_double(c.stddev[0]) << ',' << format_double(c.bias[1]) << ','
                  << format_double(c.stddev[1]) << ',' << format_double(c.f1_sup_median) << '\n';
            cov << c.n << ',' << format_double(c.cov_sqrtn[0]) << ','
                << format_double(c.cov_sqrtn[1]) << ',' << format_double(c.cov_sqrtn[2]) << ','
                << (c.repetitions - c.failures) << ',' << c.boundary_hits << '\n';
        }
        if (!any) continue;
        write_text_file(dir + "/table_" + tag + "_" + method + ".csv", table.str());
        write_text_file(dir + "/covariance_" + tag + "_" + method + ".csv", cov.str());
    }
}

void export_histogram_samples(const McReport& report, const std::string& dir) {
    ensure_dir(dir);
    const std::string tag = scenario_tag(report.config);
    for (const CellStats& c : report.cells) {
        // sample mean over successful repetitions, for the centered columns
        Kahan sum_a, sum_b;
        std::size_t ok = 0;
        for (const RepRecord& r : c.records) {
            if (r.failed || !r.estimate) continue;
            sum_a.add((*r.estimate)[0]);
            sum_b.add((*r.estimate)[1]);
            ++ok;
        }
        const double mean_a = ok ? sum_a.sum / static_cast<double>(ok) : 0.0;
        const double mean_b = ok ? sum_b.sum / static_cast<double>(ok) : 0.0;
        const double root_n = std::sqrt(static_cast<double>(c.n));

        std::ostringstream out;
        out << "rep,status,alpha,beta,alpha_sqrtn_centered,beta_sqrtn_centered,f1_sup_error\n";
        for (std::size_t i = 0; i < c.records.size(); ++i) {
            const RepRecord& r = c.records[i];
            if (r.failed || !r.estimate) {
                out << i << ",failed,,,,,\n";
                continue;
            }
            out << i << ",ok," << format_double((*r.estimate)[0]) << ','
                << format_double((*r.estimate)[1]) << ','
                << format_double(root_n * ((*r.estimate)[0] - mean_a)) << ','
                << format_double(root_n * ((*r.estimate)[1] - mean_b)) << ','
                << format_double(r.f1_sup_error) << '\n';
        }
        write_text_file(
            dir + "/samples_" + tag + "_" + c.method + "_n" + std::to_string(c.n) + ".csv",
            out.str());
    }
}

void export_curves(const McReport& report, const std::string& dir) {
    ensure_dir(dir);
    const std::string tag = scenario_tag(report.config);
    for (const CurvePanel& p : report.panels) {
        if (p.block_size == 0) continue;
        std::ostringstream f1, fz;
        f1 << "rep,x,f1_hat,f1_true\n";
        fz << "rep,x,F_hat,F_true\n";
        for (std::size_t b = 0; b < p.rep_index.size(); ++b) {
            for (std::size_t j = 0; j < p.block_size; ++j) {
                const std::size_t k = b * p.block_size + j;
                f1 << p.rep_index[b] << ',' << format_double(p.grid_nodes[k]) << ','
                   << format_double(p.f1_hat[k]) << ',' << format_double(p.f1_true[k]) << '\n';
                fz << p.rep_index[b] << ',' << format_double(p.grid_nodes[k]) << ','
                   << format_double(p.fhat[k]) << ',' << format_double(p.f_true[k]) << '\n';
            }
        }
        write_text_file(dir + "/curves_f1_" + tag + "_n" + std::to_string(p.n) + ".csv",
                        f1.str());
        write_text_file(dir + "/curves_ecdf_" + tag + "_n" + std::to_string(p.n) + ".csv",
                        fz.str());
    }
}

void write_manifest(const McReport& report, const std::string& dir) {
    ensure_dir(dir);
    nlohmann::json j;
    const std::string config_json = config_to_json(report.config);
    j["config"] = nlohmann::json::parse(config_json);
    j["config_hash"] = fnv1a_hash(config_json);
    j["version"] = kVersion;
    j["wall_seconds"] = report.wall_seconds;
    nlohmann::json cells = nlohmann::json::array();
    for (const CellStats& c : report.cells) {
        cells.push_back({{"method", c.method},
                         {"n", c.n},
                         {"repetitions", c.repetitions},
                         {"failures", c.failures},
                         {"boundary_hits", c.boundary_hits}});
    }
    j["cells"] = cells;
    write_text_file(dir + "/manifest.json", j.dump(2) + "\n");
}

void run_and_export(const ExperimentConfig& config, const std::string& dir) {
    const McReport report = run_montecarlo(config);
    export_tables(report, dir);
    export_histogram_samples(report, dir);
    export_curves(report, dir);
    write_manifest(report, dir);
}

}  // namespace chronomix
