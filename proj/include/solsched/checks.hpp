#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solsched/kernel.hpp"
#include "solsched/simulator.hpp"
#include "solsched/solvers.hpp"

namespace solsched::checks {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // the quantity the check bounds
    double threshold = 0.0;
    std::string details;
};

/// max |row sum - 1| over embedded rows; bound 1e-12.
CheckResult row_sums_embedded(const EmbeddedKernel& kernel);

/// max |row sum - 1| over uniformized rows and self-loop nonnegativity.
CheckResult row_sums_uniformized(const UniformizedKernel& kernel);

/// max |row mass - gamma/(gamma+alpha)| over discounted rows; bound 1e-12.
CheckResult row_mass_discounted(const DiscountedKernel& kernel);

/// Successor battery never below the post-action level nor above M, and the
/// successor radiation state is the post-action one.
CheckResult battery_monotonicity(const EmbeddedKernel& kernel, const StateSpace& space,
                                 const ValidatedParams& params);

/// Summing a row over battery levels for a fixed next event gives mu/gamma.
CheckResult event_marginals(const EmbeddedKernel& kernel, const StateSpace& space,
                            const ValidatedParams& params);

/// Random closed-form entries vs the defining integrals; bound 1e-9.
CheckResult quadrature_spot_check(const EmbeddedKernel& embedded, const DiscountedKernel* discounted,
                                  const StateSpace& space, const ValidatedParams& params,
                                  int samples, std::uint64_t seed);

/// Admissible pair count from first principles vs the kernel's pair count.
CheckResult admissible_pair_count(const EmbeddedKernel& kernel, const StateSpace& space,
                                  const ValidatedParams& params);

/// max_s |v(s) - min_a {c~(s,a) - v(k*) + sum P~ v}|; bound 10 * tolerance.
CheckResult bellman_residual_average(const AverageSolveResult& result,
                                     const UniformizedKernel& kernel, const SolverConfig& config);

/// max_s |v(s) - min_a {c(s,a) + sum m_a v}|; bound 10 * tolerance.
CheckResult bellman_residual_discounted(const DiscountedSolveResult& result,
                                        const DiscountedKernel& kernel,
                                        const SolverConfig& config);

CheckResult policy_admissible(const Policy& policy, const StateSpace& space,
                              const ValidatedParams& params);

/// For every (radiation state, class) group, {m : action = SBS} is
/// upward-closed in m.
CheckResult threshold_structure(const Policy& policy, const StateSpace& space);

/// Observed epoch transition frequencies vs kernel rows; passes when every
/// compared row's L1 distance is within its multinomial concentration bound
/// (3x expected L1 at that row's visit count). measured = max raw L1.
CheckResult empirical_kernel(const Policy& policy, const ValidatedParams& params,
                             const StateSpace& space, const EmbeddedKernel& kernel,
                             const SimConfig& config, long events, long min_visits = 500);

/// |simulated mean average cost - gain| / gain within rel_tol.
CheckResult gain_vs_simulation(double gain, const SimulationResult& sim, double rel_tol);

/// Per-class arrival counts within 4 sqrt(lambda H) of lambda H (flagged).
CheckResult arrival_count_sanity(const SimulationResult& sim, const ValidatedParams& params,
                                 const SimConfig& config);

/// Full battery for cmd_check: kernels, solves, simulation cross-checks.
std::vector<CheckResult> run_all(const ValidatedParams& params, const StateSpace& space,
                                 const SolverConfig& solver_config, const SimConfig& sim_config,
                                 long empirical_events);

}  // namespace solsched::checks
