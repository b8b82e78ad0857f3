#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solsched/kernel.hpp"

namespace solsched {

/// Total mapping from decision states to actions.
struct Policy {
    std::vector<Action> actions;  // indexed by state
    std::string provenance;       // rvi-average | vi-discounted | greedy | all-mbs | custom

    Action at(int state) const { return actions[state]; }
    bool operator==(const Policy& other) const { return actions == other.actions; }
};

/// Checks every assigned action against admissible_actions; returns the first
/// offending state or nullopt.
std::optional<int> first_inadmissible_state(const Policy& policy, const StateSpace& space,
                                            const ValidatedParams& params);

struct SolverConfig {
    double tolerance = 1e-10;       // span stopping threshold
    int reference_state = 0;        // k*
    long max_iterations = 10000000;
    double tie_tolerance = 1e-9;    // diagnostic only; argmin prefers the lower action code
    bool record_spans = false;
};

class SolveError : public std::runtime_error {
  public:
    SolveError(const std::string& what, long iterations, double last_span)
        : std::runtime_error(what), iterations(iterations), last_span(last_span) {}
    long iterations;
    double last_span;
};

struct TieDiagnostic {
    int state = 0;
    double gap = 0.0;  // |q(best) - q(runner-up)| at extraction
};

struct AverageSolveResult {
    Policy policy;
    double gain = 0.0;             // g*, cost per second
    double gain_lower = 0.0;       // phi * min Bellman increment
    double gain_upper = 0.0;       // phi * max Bellman increment
    std::vector<double> values;    // relative values v(s)
    long iterations = 0;
    double final_span = 0.0;
    std::vector<TieDiagnostic> ties;
    std::vector<double> spans;     // per-iteration spans when recorded
};

struct DiscountedSolveResult {
    Policy policy;
    std::vector<double> values;    // discounted expected total cost
    long iterations = 0;
    double final_span = 0.0;
    std::vector<TieDiagnostic> ties;
    std::vector<double> spans;
};

struct AverageEvalResult {
    double gain = 0.0;             // g^pi
    std::vector<double> values;    // bias values
    long iterations = 0;
    double final_span = 0.0;
};

/// Relative value iteration on the uniformized chain (average criterion).
AverageSolveResult solve_average_rvi(const UniformizedKernel& kernel, const SolverConfig& config);

/// Value iteration on the discounted kernel. Reported values carry a final
/// constant-shift extrapolation of the geometric tail so the Bellman residual
/// matches the span tolerance; the policy is unaffected (all actions of a
/// state share one event rate, so constant shifts never move an argmin).
DiscountedSolveResult solve_discounted_vi(const DiscountedKernel& kernel,
                                          const SolverConfig& config);

/// Same recursion as solve_average_rvi with the minimization replaced by the
/// policy's action.
AverageEvalResult evaluate_policy_average(const Policy& policy, const UniformizedKernel& kernel,
                                          const SolverConfig& config);

/// Serve from the SBS whenever the battery suffices.
Policy greedy_policy(const ValidatedParams& params, const StateSpace& space);

/// Serve every packet from the MBS (baseline for the analytic gain oracle).
Policy all_mbs_policy(const ValidatedParams& params, const StateSpace& space);

/// Side-by-side action table, one row per battery level, one column group per
/// (event class, radiation state), one sub-column per policy.
std::string policy_table(std::span<const Policy> policies, const StateSpace& space);

}  // namespace solsched
