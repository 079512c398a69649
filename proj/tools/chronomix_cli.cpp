#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chronomix/decode.hpp"
#include "chronomix/errors.hpp"
#include "chronomix/estimate.hpp"
#include "chronomix/harness.hpp"
#include "chronomix/io.hpp"
#include "chronomix/simulate.hpp"

namespace {

using namespace chronomix;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Trajectory CSV as written by the simulate subcommand: observations in the
// first column, optional extra columns (hidden labels) ignored.
std::vector<double> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open " + path);
    std::vector<double> z;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto pos = line.find(',');
        const std::string token = pos == std::string::npos ? line : line.substr(0, pos);
        if (first) {
            first = false;
            try {
                z.push_back(std::stod(token));
            } catch (const std::exception&) {
                // header row
            }
            continue;
        }
        z.push_back(std::stod(token));
    }
    if (z.empty()) throw IoFailure("no data rows in " + path);
    return z;
}

nlohmann::json scenario_json(const Scenario& s) {
    return nlohmann::json::parse(scenario_to_json(s));
}

int cmd_simulate(const std::string& scenario_arg, std::optional<std::size_t> n,
                 std::optional<std::uint64_t> seed, const std::string& out,
                 bool with_labels) {
    Scenario s = load_scenario(scenario_arg);
    if (n) s = s.with_n(*n);
    if (seed) s = s.with_seed(*seed);
    const Trajectory traj = simulate_observed(s);

    std::ostringstream csv;
    csv << (with_labels ? "z,x\n" : "z\n");
    for (std::size_t i = 0; i < traj.z.size(); ++i) {
        csv << format_double(traj.z[i]);
        if (with_labels) csv << ',' << traj.x[i];
        csv << '\n';
    }
    write_text_file(out, csv.str());
    std::cout << "wrote " << traj.z.size() << " observations to " << out << "\n";
    return 0;
}

int cmd_estimate(const std::string& scenario_arg, std::optional<std::size_t> n,
                 std::optional<std::uint64_t> seed, const std::string& method, bool clamp_f1,
                 bool analytic_f0, std::size_t grid_cells, const std::string& out,
                 const std::string& curves_dir) {
    Scenario s = load_scenario(scenario_arg);
    if (n) s = s.with_n(*n);
    if (seed) s = s.with_seed(*seed);

    EstimateOptions opts;
    opts.run_s = method == "s" || method == "both";
    opts.clamp_f1 = clamp_f1;
    opts.analytic_f0 = analytic_f0;
    opts.grid_cells = grid_cells;
    const EstimationReport rep = run_instance(s, opts);

    nlohmann::json j;
    j["scenario"] = scenario_json(s);
    j["method"] = method;
    j["theta_hat"] = {{"alpha", rep.theta_hat.alpha}, {"beta", rep.theta_hat.beta}};
    if (rep.theta_tilde) {
        j["theta_tilde"] = {{"alpha", rep.theta_tilde->alpha}, {"beta", rep.theta_tilde->beta}};
        j["s_contrast_at_min"] = rep.s_contrast_at_min;
    }
    j["v_hat"] = {rep.v_hat.v1, rep.v_hat.v2};
    j["contrast_at_min"] = rep.contrast_at_min;
    j["solver_path"] =
        rep.solver_path == SolverPath::ClosedForm ? "closed-form" : "fallback-search";
    j["grid_nodes"] = rep.grid_nodes;
    j["f1_cdf"] = rep.f1_curve;
    if (!rep.f1_curve_tilde.empty()) j["f1_cdf_tilde"] = rep.f1_curve_tilde;
    j["f1_density"] = rep.f1_density;
    j["bandwidth"] = rep.bandwidth;
    j["elapsed_seconds"] = rep.elapsed_seconds;
    write_text_file(out, j.dump(2) + "\n");

    if (!curves_dir.empty()) {
        std::filesystem::create_directories(curves_dir);
        std::ostringstream csv;
        csv << "x,f1_cdf,f1_density,F_hat\n";
        for (std::size_t k = 0; k < rep.grid_nodes.size(); ++k) {
            csv << format_double(rep.grid_nodes[k]) << ',' << format_double(rep.f1_curve[k])
                << ',' << format_double(rep.f1_density[k]) << ','
                << format_double(rep.fhat_curve[k]) << '\n';
        }
        write_text_file(curves_dir + "/curves_" + (s.name.empty() ? "custom" : s.name) + ".csv",
                        csv.str());
    }
    std::cout << "theta_hat = (" << format_double(rep.theta_hat.alpha) << ", "
              << format_double(rep.theta_hat.beta) << ")  [" << j["solver_path"].get<std::string>()
              << ", d_n = " << format_double(rep.contrast_at_min) << "]\n";
    if (rep.theta_tilde) {
        std::cout << "theta_tilde = (" << format_double(rep.theta_tilde->alpha) << ", "
                  << format_double(rep.theta_tilde->beta)
                  << ")  [s_n = " << format_double(rep.s_contrast_at_min) << "]\n";
    }
    std::cout << "report written to " << out << "\n";
    return 0;
}

int cmd_decode(const std::string& report_path, const std::string& trajectory_path, int offset,
               const std::string& out) {
    const auto j = nlohmann::json::parse(read_file(report_path));
    const Scenario s = scenario_from_json(j.at("scenario").dump());
    const ThetaParam theta(j.at("theta_hat").at("alpha").get<double>(),
                           j.at("theta_hat").at("beta").get<double>(), s.theta.delta);
    SampledDensity f1;
    f1.nodes = j.at("grid_nodes").get<std::vector<double>>();
    f1.values = j.at("f1_density").get<std::vector<double>>();
    const GoldPairLaw gold{s.mu0(), s.var0(), s.phi};

    const std::vector<double> z = read_series_csv(trajectory_path);
    const auto pairs = decode_series(theta, f1, gold, z, offset);

    std::ostringstream csv;
    csv << "pair,i,j,z_i,z_j,p00,p01,p10,p11,map_first,map_second,undecidable\n";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& p = pairs[k];
        csv << k << ',' << p.first_index << ',' << p.first_index + 1 << ','
            << format_double(z[p.first_index]) << ',' << format_double(z[p.first_index + 1])
            << ',';
        if (p.posterior) {
            const auto& q = *p.posterior;
            csv << format_double(q.probs[0]) << ',' << format_double(q.probs[1]) << ','
                << format_double(q.probs[2]) << ',' << format_double(q.probs[3]) << ','
                << q.map_k << ',' << q.map_l << ",0\n";
        } else {
            csv << ",,,,,,1\n";
        }
    }
    write_text_file(out, csv.str());
    std::cout << "decoded " << pairs.size() << " pairs to " << out << "\n";
    return 0;
}

int cmd_montecarlo(const std::string& config_path, const std::string& out_dir,
                   std::optional<std::size_t> workers) {
    ExperimentConfig config = load_config(config_path);
    if (workers) config.workers = *workers;
    const std::string dir = !out_dir.empty() ? out_dir
                            : !config.output_dir.empty() ? config.output_dir
                                                         : std::string{"mc_out"};
    run_and_export(config, dir);
    std::cout << "outputs written to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chronological mixture model: simulation, estimation, decoding"};
    app.require_subcommand(1);

    // simulate
    std::string sim_scenario = "S0strong", sim_out = "trajectory.csv";
    std::optional<std::size_t> sim_n;
    std::optional<std::uint64_t> sim_seed;
    bool sim_labels = false;
    auto* sim = app.add_subcommand("simulate", "Generate one observed trajectory");
    sim->add_option("--scenario", sim_scenario, "Preset name or scenario JSON path");
    sim->add_option("--n", sim_n, "Trajectory length override");
    sim->add_option("--seed", sim_seed, "Seed override");
    sim->add_option("--out", sim_out, "Output CSV path");
    sim->add_flag("--with-labels", sim_labels, "Include the hidden labels column");

    // estimate
    std::string est_scenario = "S0strong", est_method = "d", est_out = "estimate.json";
    std::string est_curves;
    std::optional<std::size_t> est_n;
    std::optional<std::uint64_t> est_seed;
    bool est_clamp = false, est_analytic_f0 = false;
    std::size_t est_cells = 64;
    auto* est = app.add_subcommand("estimate", "Estimate the transition parameters and invert "
                                               "the poisoning distribution");
    est->add_option("--scenario", est_scenario, "Preset name or scenario JSON path");
    est->add_option("--n", est_n, "Trajectory length override");
    est->add_option("--seed", est_seed, "Seed override");
    est->add_option("--method", est_method, "d, s, or both")
        ->check(CLI::IsMember({"d", "s", "both"}));
    est->add_flag("--clamp-f1", est_clamp, "Clip the inverted CDF to a valid CDF");
    est->add_flag("--analytic-f0", est_analytic_f0,
                  "Use the exact Gaussian marginal instead of the Monte Carlo reference");
    est->add_option("--grid-cells", est_cells, "Grid resolution per axis");
    est->add_option("--out", est_out, "Report JSON path");
    est->add_option("--curves-dir", est_curves, "Also write curve CSVs into this directory");

    // decode
    std::string dec_report, dec_traj, dec_out = "decoded.csv";
    int dec_offset = 0;
    auto* dec = app.add_subcommand("decode", "Posterior pair labels for a trajectory");
    dec->add_option("--report", dec_report, "Estimate report JSON")->required();
    dec->add_option("--trajectory", dec_traj, "Trajectory CSV (column z)")->required();
    dec->add_option("--offset", dec_offset, "Pairing offset, 0 or 1")
        ->check(CLI::IsMember({0, 1}));
    dec->add_option("--out", dec_out, "Output CSV path");

    // montecarlo
    std::string mc_config, mc_out;
    std::optional<std::size_t> mc_workers;
    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo performance study from a config");
    mc->add_option("--config", mc_config, "Experiment config JSON")->required();
    mc->add_option("--out", mc_out, "Output directory");
    mc->add_option("--workers", mc_workers, "Concurrent repetitions");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_scenario, sim_n, sim_seed, sim_out, sim_labels);
        if (est->parsed()) {
            return cmd_estimate(est_scenario, est_n, est_seed, est_method, est_clamp,
                                est_analytic_f0, est_cells, est_out, est_curves);
        }
        if (dec->parsed()) return cmd_decode(dec_report, dec_traj, dec_offset, dec_out);
        if (mc->parsed()) return cmd_montecarlo(mc_config, mc_out, mc_workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
