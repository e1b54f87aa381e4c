// Command-line front end: run closed-loop scenarios, parameter sweeps, and
// network validation; emits CSV artifacts for plotting.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ofo/csv.hpp"
#include "ofo/errors.hpp"
#include "ofo/fixtures.hpp"
#include "ofo/network_io.hpp"
#include "ofo/scenario.hpp"
#include "ofo/scenario_io.hpp"
#include "ofo/sweep.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<int> max_iter;
    std::optional<unsigned long long> seed;
};

ofo::Scenario load_with_overrides(const CommonOpts& opts) {
    ofo::Scenario scenario = ofo::load_scenario_json(opts.scenario_path);
    if (opts.alpha) scenario.alpha = *opts.alpha;
    if (opts.beta) scenario.beta = *opts.beta;
    if (opts.max_iter) scenario.max_iterations = *opts.max_iter;
    if (opts.seed) scenario.seed = *opts.seed;
    scenario.validate();
    return scenario;
}

int cmd_run(const CommonOpts& opts) {
    const ofo::Scenario scenario = load_with_overrides(opts);
    const ofo::Trajectory trajectory = ofo::run_scenario(scenario);

    fs::create_directories(opts.out_dir);
    ofo::write_trajectory_csv((fs::path(opts.out_dir) / "trajectory.csv").string(), trajectory);
    ofo::write_summary((fs::path(opts.out_dir) / "summary.txt").string(), scenario, trajectory);
    if (scenario.hierarchy)
        ofo::write_interfaces_csv((fs::path(opts.out_dir) / "interfaces.csv").string(),
                                  trajectory);

    std::cout << "wrote " << (fs::path(opts.out_dir) / "trajectory.csv").string() << " ("
              << trajectory.rows.size() << " rows)\n";
    if (trajectory.diverged)
        std::cout << "note: plant diverged; trajectory truncated (see summary.txt)\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    ofo::Scenario scenario = load_with_overrides(opts);
    if (scenario.kind != ofo::Scenario::Kind::tracking) {
        std::cerr << "error: sweep requires a tracking scenario\n";
        return 1;
    }
    const ofo::SweepResult sweep =
        ofo::parameter_sweep(scenario, ofo::default_sweep_alphas(), ofo::default_sweep_betas());

    fs::create_directories(opts.out_dir);
    const std::string path = (fs::path(opts.out_dir) / "sweep.csv").string();
    ofo::write_sweep_csv(path, sweep);
    std::cout << "wrote " << path << " (" << sweep.cells.size() << " cells)\n";
    return 0;
}

int cmd_validate(const std::string& network_ref) {
    const ofo::Network network = ofo::resolve_network(network_ref);
    const ofo::PowerFlowSolution sol =
        ofo::solve_power_flow(network, ofo::nominal_inputs(network));

    double vmin = 1e9, vmax = -1e9;
    const int slack = network.slack_index();
    for (int i = 0; i < static_cast<int>(network.buses.size()); ++i) {
        if (i == slack) continue;
        vmin = std::min(vmin, std::abs(sol.v(i)));
        vmax = std::max(vmax, std::abs(sol.v(i)));
    }

    std::cout << "buses = " << network.buses.size() << ", branches = " << network.branches.size()
              << ", actuators = " << network.actuators.size() << "\n";
    std::cout << "power flow residual = " << ofo::format_g12(sol.mismatch_norm) << " pu in "
              << sol.iterations << " iterations\n";
    std::cout << "voltage range = [" << ofo::format_g12(vmin) << ", " << ofo::format_g12(vmax)
              << "] pu\n";
    if (sol.pcc_flow)
        std::cout << "pcc exchange = (" << ofo::format_g12(sol.pcc_flow->first) << ", "
                  << ofo::format_g12(sol.pcc_flow->second) << ") pu\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop feedback-optimization simulator for grid flexibility"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string network_ref;

    CLI::App* run = app.add_subcommand("run", "simulate one scenario and write CSV artifacts");
    run->add_option("--scenario", opts.scenario_path, "scenario JSON file")->required();
    run->add_option("--out", opts.out_dir, "output directory");
    run->add_option("--alpha", opts.alpha, "override controller gain");
    run->add_option("--beta", opts.beta, "override momentum weight");
    run->add_option("--max-iter", opts.max_iter, "override iteration count");
    run->add_option("--seed", opts.seed, "override noise seed");

    CLI::App* sweep = app.add_subcommand("sweep", "gain/momentum sweep over a tracking scenario");
    sweep->add_option("--scenario", opts.scenario_path, "scenario JSON file")->required();
    sweep->add_option("--out", opts.out_dir, "output directory");
    sweep->add_option("--max-iter", opts.max_iter, "override iteration count");
    sweep->add_option("--seed", opts.seed, "override noise seed");

    CLI::App* validate = app.add_subcommand("validate", "solve a network at its nominal point");
    validate->add_option("--network", network_ref, "network JSON file or fixture name")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (validate->parsed()) return cmd_validate(network_ref);
    } catch (const ofo::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ofo::OfoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
