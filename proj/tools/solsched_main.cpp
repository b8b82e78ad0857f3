// solsched: SMDP link-selection policies for a solar-assisted HetNet,
// plus the discrete-event simulator that evaluates them.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solsched/cli.hpp"

namespace {

using solsched::cli::Criterion;
using solsched::cli::RunManifest;

void add_common(CLI::App* cmd, RunManifest& manifest, std::string& config_path,
                std::string& out_dir) {
    cmd->add_option("--config", config_path, "configuration file (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    (void)manifest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SMDP downlink packet scheduling for solar-assisted HetNets"};
    app.require_subcommand(1);

    RunManifest manifest;
    std::string config_path;
    std::string out_dir = ".";
    std::string criterion = "both";
    std::vector<std::string> policies;
    std::string values_csv;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double horizon = 0.0;
    bool horizon_set = false;
    int runs = 0;
    bool runs_set = false;
    std::string kernel_dump, trace_path;

    CLI::App* solve = app.add_subcommand("solve", "compute scheduling policies");
    add_common(solve, manifest, config_path, out_dir);
    solve->add_option("--criterion", criterion, "average|discounted|both")
        ->check(CLI::IsMember({"average", "discounted", "both"}))
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
    add_common(simulate, manifest, config_path, out_dir);
    simulate->add_option("--policy", policies, "rvi|vi|greedy|all-mbs|file:PATH (repeatable)");
    simulate->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    simulate->add_option("--horizon", horizon, "seconds per run")->each([&](const std::string&) {
        horizon_set = true;
    });
    simulate->add_option("--runs", runs, "number of runs")->each([&](const std::string&) {
        runs_set = true;
    });
    simulate->add_option("--trace", trace_path, "event trace file for the first run");

    CLI::App* sweep = app.add_subcommand("sweep", "re-solve and simulate across parameter values");
    add_common(sweep, manifest, config_path, out_dir);
    sweep->add_option("--policy", policies, "policies to compare (default rvi vi greedy)");
    sweep->add_option("--param", manifest.sweep.parameter_path, "dotted config path to sweep")
        ->capture_default_str();
    sweep->add_option("--values", values_csv, "comma-separated values (default 2,4,...,18)");
    sweep->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });
    sweep->add_option("--horizon", horizon, "seconds per run")->each([&](const std::string&) {
        horizon_set = true;
    });
    sweep->add_option("--runs", runs, "number of runs")->each([&](const std::string&) {
        runs_set = true;
    });

    CLI::App* check = app.add_subcommand("check", "run the invariant battery");
    add_common(check, manifest, config_path, out_dir);
    check->add_option("--events", manifest.check_events, "events for the empirical kernel check")
        ->capture_default_str();
    check->add_option("--dump-kernel", kernel_dump, "write the embedded kernel as CSV");
    check->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI11_PARSE(app, argc, argv);

    try {
        manifest.config_path = config_path;
        manifest.out_dir = out_dir;
        manifest.policies = policies;
        solsched::cli::load_manifest_config(manifest);
        if (seed_set) manifest.bundle.sim.master_seed = seed;
        if (horizon_set) manifest.bundle.sim.horizon = horizon;
        if (runs_set) manifest.bundle.sim.runs = runs;
        if (!kernel_dump.empty()) manifest.kernel_dump_path = kernel_dump;
        if (!trace_path.empty()) manifest.trace_path = trace_path;
        if (!values_csv.empty()) {
            manifest.sweep.values.clear();
            std::istringstream in(values_csv);
            std::string tok;
            while (std::getline(in, tok, ',')) manifest.sweep.values.push_back(std::stod(tok));
        }
        if (criterion == "average") manifest.criterion = Criterion::Average;
        else if (criterion == "discounted") manifest.criterion = Criterion::Discounted;
        else manifest.criterion = Criterion::Both;

        if (solve->parsed()) {
            manifest.command = solsched::cli::Command::Solve;
            return solsched::cli::cmd_solve(manifest);
        }
        if (simulate->parsed()) {
            manifest.command = solsched::cli::Command::Simulate;
            return solsched::cli::cmd_simulate(manifest);
        }
        if (sweep->parsed()) {
            manifest.command = solsched::cli::Command::Sweep;
            return solsched::cli::cmd_sweep(manifest);
        }
        manifest.command = solsched::cli::Command::Check;
        return solsched::cli::cmd_check(manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
