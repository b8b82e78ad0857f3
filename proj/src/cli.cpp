#include "solsched/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "solsched/checks.hpp"
#include "solsched/kernel.hpp"
#include "solsched/rng.hpp"
#include "solsched/simulator.hpp"

namespace solsched::cli {

namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

void emit(const RunManifest& manifest, const std::string& line) {
    if (!manifest.quiet) std::cout << line << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
}

struct Workspace {
    ValidatedParams params;
    StateSpace space;
    EmbeddedKernel embedded;
    UniformizedKernel uniformized;
};

Workspace make_workspace(const ConfigBundle& bundle) {
    ValidatedParams params = ValidatedParams::validate(bundle.system);
    StateSpace space = StateSpace::of(params);
    EmbeddedKernel embedded = build_embedded_kernel(params, space);
    UniformizedKernel uniformized = uniformize(embedded, params);
    return {std::move(params), space, std::move(embedded), std::move(uniformized)};
}

void print_warnings(const RunManifest& manifest, const ValidatedParams& params) {
    for (const auto& w : params.warnings())
        emit(manifest, "warning: " + w.field + ": " + w.message);
}

/// Resolves a --policy spec, solving on demand.
Policy resolve_policy(const std::string& spec, const Workspace& ws, const SolverConfig& solver) {
    if (spec == "rvi") return solve_average_rvi(ws.uniformized, solver).policy;
    if (spec == "vi") {
        const DiscountedKernel discounted = build_discounted_kernel(ws.params, ws.space);
        return solve_discounted_vi(discounted, solver).policy;
    }
    if (spec == "greedy") return greedy_policy(ws.params, ws.space);
    if (spec == "all-mbs") return all_mbs_policy(ws.params, ws.space);
    if (spec.rfind("file:", 0) == 0) return read_policy_file(spec.substr(5), ws.space);
    throw std::runtime_error("unknown policy spec '" + spec +
                             "' (expected rvi|vi|greedy|all-mbs|file:PATH)");
}

std::string runs_csv_header(int classes) {
    std::string head = "policy,run,seed,total_cost,avg_cost,violations";
    for (int n = 1; n <= classes; ++n)
        head += ",mbs_class" + std::to_string(n) + ",sbs_class" + std::to_string(n);
    head += ",solar_transitions";
    return head;
}

void append_runs_csv(std::string& csv, const std::string& policy_name,
                     const SimulationResult& result) {
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const RunStats& run = result.runs[i];
        csv += policy_name + "," + std::to_string(i) + "," + std::to_string(run.seed) + "," +
               format_double(run.total_cost) + "," + format_double(run.avg_cost) + "," +
               std::to_string(run.violations);
        for (std::size_t n = 0; n < run.mbs_served.size(); ++n)
            csv += "," + std::to_string(run.mbs_served[n]) + "," + std::to_string(run.sbs_served[n]);
        csv += "," + std::to_string(run.solar_transitions) + "\n";
    }
}

std::string kernel_dump(const EmbeddedKernel& kernel) {
    std::string out = "source,action,successor,probability\n";
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        for (std::size_t j = 0; j < row.successors.size(); ++j)
            out += std::to_string(row.source) + "," + std::to_string(action_code(row.action)) +
                   "," + std::to_string(row.successors[j]) + "," +
                   format_double(row.probabilities[j]) + "\n";
    }
    return out;
}

}  // namespace

void load_manifest_config(RunManifest& manifest) {
    std::ifstream in(manifest.config_path);
    if (!in) throw ConfigError("cannot open config file '" + manifest.config_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    manifest.config_text = buffer.str();
    manifest.bundle = parse_config(manifest.config_text);
}

void write_policy_file(const std::string& path, const Policy& policy, const StateSpace& space) {
    std::string out = "index,solar_state,battery,event,action\n";
    for (int i = 0; i < space.size(); ++i) {
        const DecisionState s = space.state_at(i);
        out += std::to_string(i) + "," + std::to_string(s.solar_state) + "," +
               std::to_string(s.battery) + "," + to_string(s.event) + "," +
               std::to_string(action_code(policy.actions[i])) + "\n";
    }
    write_file(path, out);
}

Policy read_policy_file(const std::string& path, const StateSpace& space) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open policy file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "index,solar_state,battery,event,action")
        throw std::runtime_error(path + ": bad or missing policy header");
    Policy policy{std::vector<Action>(space.size(), Action::Fictitious), "file:" + path};
    std::vector<bool> seen(space.size(), false);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 5 fields");
        const int index = std::stoi(fields[0]);
        if (index < 0 || index >= space.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": index out of range");
        const DecisionState expect = space.state_at(index);
        if (std::stoi(fields[1]) != expect.solar_state || std::stoi(fields[2]) != expect.battery ||
            fields[3] != to_string(expect.event))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": state fields do not match index " + std::to_string(index));
        policy.actions[index] = action_from_code(std::stoi(fields[4]));
        seen[index] = true;
    }
    for (int i = 0; i < space.size(); ++i)
        if (!seen[i])
            throw std::runtime_error(path + ": missing state " + std::to_string(i));
    return policy;
}

int cmd_solve(const RunManifest& manifest) {
    const Workspace ws = make_workspace(manifest.bundle);
    print_warnings(manifest, ws.params);
    fs::create_directories(manifest.out_dir);
    const SolverConfig& solver = manifest.bundle.solver;

    std::vector<Policy> policies;
    std::ostringstream report;
    report << "states: " << ws.space.size() << "\n"
           << "admissible pairs: " << ws.embedded.pairs.pair_count() << "\n"
           << "uniformization rate phi: " << format_double(ws.uniformized.uniform_rate) << "\n";

    try {
        if (manifest.criterion != Criterion::Discounted) {
            const AverageSolveResult avg = solve_average_rvi(ws.uniformized, solver);
            report << "\n[rvi-average]\n"
                   << "gain g*: " << format_double(avg.gain) << " cost/s\n"
                   << "gain bracket: [" << format_double(avg.gain_lower) << ", "
                   << format_double(avg.gain_upper) << "]\n"
                   << "iterations: " << avg.iterations << "\n"
                   << "final span: " << format_double(avg.final_span) << "\n"
                   << "value ties (<= " << format_double(solver.tie_tolerance)
                   << "): " << avg.ties.size() << "\n";
            for (const TieDiagnostic& tie : avg.ties)
                report << "  tie at " << to_string(ws.space.state_at(tie.state)) << " gap "
                       << format_double(tie.gap) << "\n";
            policies.push_back(avg.policy);
        }
        if (manifest.criterion != Criterion::Average) {
            const DiscountedKernel discounted = build_discounted_kernel(ws.params, ws.space);
            const DiscountedSolveResult disc = solve_discounted_vi(discounted, solver);
            report << "\n[vi-discounted]\n"
                   << "iterations: " << disc.iterations << "\n"
                   << "final span: " << format_double(disc.final_span) << "\n"
                   << "value at state 0: " << format_double(disc.values[0]) << "\n"
                   << "value ties (<= " << format_double(solver.tie_tolerance)
                   << "): " << disc.ties.size() << "\n";
            for (const TieDiagnostic& tie : disc.ties)
                report << "  tie at " << to_string(ws.space.state_at(tie.state)) << " gap "
                       << format_double(tie.gap) << "\n";
            policies.push_back(disc.policy);
        }
    } catch (const SolveError& e) {
        std::cerr << "solver failed: " << e.what() << " (iterations " << e.iterations
                  << ", last span " << format_double(e.last_span) << ")\n";
        return 2;
    }
    policies.push_back(greedy_policy(ws.params, ws.space));

    for (const Policy& p : policies)
        write_policy_file((fs::path(manifest.out_dir) / ("policy_" + p.provenance + ".txt")).string(),
                          p, ws.space);
    const std::string table = policy_table(policies, ws.space);
    write_file((fs::path(manifest.out_dir) / "policy_table.txt").string(), table);
    write_file((fs::path(manifest.out_dir) / "solve_report.txt").string(), report.str());
    emit(manifest, table);
    emit(manifest, report.str());
    return 0;
}

int cmd_simulate(const RunManifest& manifest) {
    const Workspace ws = make_workspace(manifest.bundle);
    print_warnings(manifest, ws.params);
    fs::create_directories(manifest.out_dir);
    const std::vector<std::string> specs =
        manifest.policies.empty() ? std::vector<std::string>{"rvi"} : manifest.policies;

    std::string runs_csv = runs_csv_header(ws.params.class_count()) + "\n";
    std::string summary_csv = "policy,mean_avg_cost,stddev,runs,horizon\n";
    bool first = true;
    for (const std::string& spec : specs) {
        const Policy policy = resolve_policy(spec, ws, manifest.bundle.solver);
        const SimulationResult result =
            simulate(policy, ws.params, ws.space, manifest.bundle.sim);
        append_runs_csv(runs_csv, policy.provenance, result);
        summary_csv += policy.provenance + "," + format_double(result.mean_avg_cost) + "," +
                       format_double(result.stddev_avg_cost) + "," +
                       std::to_string(manifest.bundle.sim.runs) + "," +
                       format_double(manifest.bundle.sim.horizon) + "\n";
        emit(manifest, policy.provenance + ": mean avg cost " +
                           format_double(result.mean_avg_cost) + " (stddev " +
                           format_double(result.stddev_avg_cost) + ")");
        if (first && manifest.trace_path) {
            std::vector<TraceEntry> trace;
            simulate_run(policy, ws.params, ws.space, manifest.bundle.sim,
                         derive_sub_seed(manifest.bundle.sim.master_seed, 0), &trace);
            std::string out = "time,event,solar_state,battery,action,cost\n";
            for (const TraceEntry& t : trace)
                out += format_double(t.time) + "," + to_string(t.state.event) + "," +
                       std::to_string(t.state.solar_state) + "," +
                       std::to_string(t.state.battery) + "," +
                       std::to_string(action_code(t.action)) + "," + format_double(t.cost) + "\n";
            write_file(*manifest.trace_path, out);
        }
        first = false;
    }
    write_file((fs::path(manifest.out_dir) / "runs.csv").string(), runs_csv);
    write_file((fs::path(manifest.out_dir) / "summary.csv").string(), summary_csv);
    return 0;
}

int cmd_sweep(const RunManifest& manifest) {
    fs::create_directories(manifest.out_dir);
    const std::vector<std::string> specs =
        manifest.policies.empty() ? std::vector<std::string>{"rvi", "vi", "greedy"}
                                  : manifest.policies;
    if (manifest.sweep.values.empty()) throw std::runtime_error("sweep values must be nonempty");

    std::string csv = "sweep_value,policy,mean_avg_cost,stddev,status\n";
    bool any_error = false;
    for (double value : manifest.sweep.values) {
        try {
            const std::string text =
                set_config_value(manifest.config_text, manifest.sweep.parameter_path, value);
            ConfigBundle bundle = parse_config(text);
            bundle.sim = manifest.bundle.sim;  // CLI overrides win for simulation
            bundle.solver = manifest.bundle.solver;
            const Workspace ws = make_workspace(bundle);
            for (const std::string& spec : specs) {
                const Policy policy = resolve_policy(spec, ws, bundle.solver);
                const SimulationResult result = simulate(policy, ws.params, ws.space, bundle.sim);
                csv += format_double(value) + "," + policy.provenance + "," +
                       format_double(result.mean_avg_cost) + "," +
                       format_double(result.stddev_avg_cost) + ",ok\n";
                emit(manifest, manifest.sweep.parameter_path + "=" + format_double(value) + " " +
                                   policy.provenance + ": " +
                                   format_double(result.mean_avg_cost));
            }
        } catch (const std::exception& e) {
            any_error = true;
            std::string msg = e.what();
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            csv += format_double(value) + ",,,," + ("error: " + msg) + "\n";
            std::cerr << "sweep point " << value << " failed: " << e.what() << "\n";
        }
    }
    write_file((fs::path(manifest.out_dir) / "sweep.csv").string(), csv);
    return any_error ? 3 : 0;
}

int cmd_check(const RunManifest& manifest) {
    const ValidatedParams params = ValidatedParams::validate(manifest.bundle.system);
    print_warnings(manifest, params);
    const StateSpace space = StateSpace::of(params);
    if (manifest.kernel_dump_path) {
        const EmbeddedKernel kernel = build_embedded_kernel(params, space);
        write_file(*manifest.kernel_dump_path, kernel_dump(kernel));
    }

    emit(manifest, "states: " + std::to_string(space.size()) +
                       "  phi: " + format_double(params.uniformization_rate()));
    const auto results = checks::run_all(params, space, manifest.bundle.solver,
                                         manifest.bundle.sim, manifest.check_events);
    bool all_ok = true;
    for (const auto& check : results) {
        all_ok = all_ok && check.passed;
        std::ostringstream line;
        line << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": measured "
             << format_double(check.measured) << " (threshold " << format_double(check.threshold)
             << ")";
        if (!check.details.empty()) line << " - " << check.details;
        emit(manifest, line.str());
    }
    emit(manifest, all_ok ? "all checks passed" : "CHECKS FAILED");
    return all_ok ? 0 : 1;
}

}  // namespace solsched::cli
