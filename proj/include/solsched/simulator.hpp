#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solsched/kernel.hpp"
#include "solsched/solvers.hpp"

namespace solsched {

/// Battery bookkeeping at decision epochs. Quantized commits whole units at
/// every epoch (the battery processes energy in E_min steps, so the simulated
/// process is exactly the embedded SMDP chain); continuous carries the
/// sub-unit charge across epochs.
enum class BatteryMode {
    Quantized,
    Continuous,
};

struct SimConfig {
    double horizon = 3600.0;       // seconds per run
    int runs = 10;
    std::uint64_t master_seed = 42;
    double warmup = 0.0;           // costs before this time are not counted
    int initial_solar_state = 0;
    double initial_energy = -1.0;  // joules; negative = E/2
    BatteryMode battery_mode = BatteryMode::Quantized;
};

struct RunStats {
    std::uint64_t seed = 0;
    double total_cost = 0.0;
    double avg_cost = 0.0;         // total_cost / measured horizon
    long violations = 0;           // SBS demanded with insufficient energy
    std::vector<long> mbs_served;  // per class
    std::vector<long> sbs_served;  // per class
    long solar_transitions = 0;
    double min_energy = 0.0;       // over the run, joules
    double max_energy = 0.0;
};

struct SimulationResult {
    std::vector<RunStats> runs;
    double mean_avg_cost = 0.0;
    double stddev_avg_cost = 0.0;  // sample standard deviation across runs
};

struct TraceEntry {
    double time = 0.0;
    DecisionState state;
    Action action = Action::Fictitious;
    double cost = 0.0;
};

/// Single seeded run. The RNG drives only the exogenous event streams
/// (per-class arrival clocks and the solar clock), so different policies see
/// identical event trajectories under the same seed. Exact floating-time ties
/// resolve by stream order: class 1 < ... < class N < solar.
RunStats simulate_run(const Policy& policy, const ValidatedParams& params, const StateSpace& space,
                      const SimConfig& config, std::uint64_t seed,
                      std::vector<TraceEntry>* trace = nullptr);

/// Runs `config.runs` independent runs with sub-seeds derived from the master
/// seed (see rng.hpp) and aggregates. Deterministic for fixed inputs.
SimulationResult simulate(const Policy& policy, const ValidatedParams& params,
                          const StateSpace& space, const SimConfig& config);

struct EmpiricalKernelReport {
    double max_l1 = 0.0;             // over rows visited >= min_visits
    double max_l1_bound_ratio = 0.0; // max over rows of L1 / concentration bound
    int rows_compared = 0;
    int rows_skipped = 0;            // visited < min_visits
    long events = 0;
};

/// Tabulates observed (state, action) -> successor frequencies at decision
/// epochs and compares them with the embedded kernel rows. Rows visited fewer
/// than min_visits times are excluded from the maxima. The concentration
/// bound per row is 3x the expected multinomial L1 deviation
/// sum_j sqrt(2 p_j (1-p_j) / (pi n)).
EmpiricalKernelReport empirical_kernel_check(const Policy& policy, const ValidatedParams& params,
                                             const StateSpace& space, const EmbeddedKernel& kernel,
                                             const SimConfig& config, long events,
                                             long min_visits = 500);

struct DiscountedEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int runs = 0;
    double truncation_bound = 0.0;  // residual discounted cost beyond horizon
    bool horizon_warning = false;   // exp(-alpha * horizon) >= 1e-6
};

/// Monte Carlo estimate of the discounted expected total cost. When
/// initial_event is set the run starts at that decision epoch (cost at t = 0
/// undiscounted), matching the discounted value function at that state;
/// otherwise the t = 0 event is drawn from the exponential-race weights
/// mu_e / gamma.
DiscountedEstimate discounted_cost_estimate(const Policy& policy, const ValidatedParams& params,
                                            const StateSpace& space, double alpha, double horizon,
                                            int runs, std::uint64_t master_seed,
                                            int initial_solar_state, int initial_battery,
                                            std::optional<Event> initial_event);

}  // namespace solsched
