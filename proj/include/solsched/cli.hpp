#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solsched/config.hpp"

namespace solsched::cli {

enum class Command { Solve, Simulate, Sweep, Check };
enum class Criterion { Average, Discounted, Both };

struct SweepSpec {
    std::string parameter_path = "traffic.classes.0.arrival_rate";
    std::vector<double> values = {2, 4, 6, 8, 10, 12, 14, 16, 18};
};

/// Fully resolved invocation: config, command, and per-command knobs.
struct RunManifest {
    Command command = Command::Solve;
    std::string config_path;
    std::string config_text;  // raw document; sweep rewrites values through it
    ConfigBundle bundle;      // parsed config with CLI overrides applied
    Criterion criterion = Criterion::Both;
    std::vector<std::string> policies;  // rvi | vi | greedy | all-mbs | file:PATH
    std::string out_dir = ".";
    SweepSpec sweep;
    long check_events = 1000000;
    std::optional<std::string> kernel_dump_path;
    std::optional<std::string> trace_path;
    bool quiet = false;
};

/// Loads the config file into the manifest (text + parsed bundle).
void load_manifest_config(RunManifest& manifest);

int cmd_solve(const RunManifest& manifest);
int cmd_simulate(const RunManifest& manifest);
int cmd_sweep(const RunManifest& manifest);
int cmd_check(const RunManifest& manifest);

/// Plain delimited policy file: header then one "index,r,m,event,action"
/// line per state, events rendered e1..eN / solar, actions as codes.
void write_policy_file(const std::string& path, const Policy& policy, const StateSpace& space);
Policy read_policy_file(const std::string& path, const StateSpace& space);

/// Shortest round-trippable decimal rendering used in every CSV.
std::string format_double(double value);

}  // namespace solsched::cli
