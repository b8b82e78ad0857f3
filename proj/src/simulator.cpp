#include "solsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "solsched/rng.hpp"

namespace solsched {

namespace {

/// Event-driven core shared by the measurement entry points. The RNG touches
/// only the exogenous clocks, so event trajectories are policy-independent
/// for a fixed seed.
struct EventLoop {
    const ValidatedParams& params;
    const StateSpace& space;
    Rng rng;
    BatteryMode mode;
    int solar = 0;
    double energy = 0.0;  // joules
    double now = 0.0;
    std::vector<double> next_fire;  // class 1..N then solar

    EventLoop(const ValidatedParams& p, const StateSpace& sp, std::uint64_t seed, int r0,
              double b0, BatteryMode m)
        : params(p), space(sp), rng(seed), mode(m), solar(r0), energy(b0) {}

    void draw_clocks() {
        next_fire.clear();
        for (int n = 1; n <= params.class_count(); ++n)
            next_fire.push_back(now + rng.exponential(params.arrival_rate(n)));
        next_fire.push_back(now + rng.exponential(params.transition_rate(solar)));
    }

    /// Advances to the next event; exact time ties break by stream order.
    /// Returns the decision state (battery already charged and quantized).
    DecisionState step() {
        int stream = 0;
        for (int i = 1; i < static_cast<int>(next_fire.size()); ++i)
            if (next_fire[i] < next_fire[stream]) stream = i;
        const double t = next_fire[stream];
        energy = std::min(params.battery_capacity(),
                          energy + params.charge_power(solar) * (t - now));
        now = t;
        const int m = quantized_level();
        if (mode == BatteryMode::Quantized)
            energy = std::min(m * params.battery_unit(), params.battery_capacity());
        const Event e = stream < params.class_count() ? Event::arrival(stream + 1)
                                                      : Event::solar_change();
        return {solar, m, e};
    }

    int quantized_level() const {
        const int m = static_cast<int>(std::floor(energy / params.battery_unit() + 1e-9));
        return std::min(m, params.battery_units());
    }

    /// Applies the action for the state returned by step(); resamples the
    /// fired stream's clock. Returns the action actually taken (MBS fallback
    /// when the SBS lacks energy) and whether that fallback fired.
    std::pair<Action, bool> apply(const DecisionState& s, Action a) {
        bool violation = false;
        if (!s.event.is_arrival()) {
            solar = params.next_solar_state(solar);
            next_fire.back() = now + rng.exponential(params.transition_rate(solar));
            return {Action::Fictitious, false};
        }
        const int cls = s.event.packet_class();
        if (a == Action::ServeSbs && s.battery < params.sbs_cost_units(cls)) {
            a = Action::ServeMbs;
            violation = true;
        }
        if (a == Action::ServeSbs) {
            energy = std::max(0.0, energy - params.sbs_cost_units(cls) * params.battery_unit());
        }
        next_fire[cls - 1] = now + rng.exponential(params.arrival_rate(cls));
        return {a, violation};
    }
};

double initial_energy_or_default(const ValidatedParams& params, double requested) {
    if (requested < 0.0) return 0.5 * params.battery_capacity();
    if (requested > params.battery_capacity())
        throw std::invalid_argument("initial_energy exceeds battery capacity");
    return requested;
}

void check_sim_config(const SimConfig& config, const ValidatedParams& params) {
    if (!(config.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (config.runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (config.warmup < 0.0 || config.warmup >= config.horizon)
        throw std::invalid_argument("warmup must lie in [0, horizon)");
    if (config.initial_solar_state < 0 ||
        config.initial_solar_state >= params.solar_state_count())
        throw std::invalid_argument("initial_solar_state out of range");
}

}  // namespace

RunStats simulate_run(const Policy& policy, const ValidatedParams& params, const StateSpace& space,
                      const SimConfig& config, std::uint64_t seed,
                      std::vector<TraceEntry>* trace) {
    check_sim_config(config, params);
    if (static_cast<int>(policy.actions.size()) != space.size())
        throw std::invalid_argument("policy does not cover the state space");

    RunStats stats;
    stats.seed = seed;
    stats.mbs_served.assign(params.class_count(), 0);
    stats.sbs_served.assign(params.class_count(), 0);

    EventLoop loop(params, space, seed, config.initial_solar_state,
                   initial_energy_or_default(params, config.initial_energy),
                   config.battery_mode);
    loop.draw_clocks();
    stats.min_energy = stats.max_energy = loop.energy;

    while (true) {
        const DecisionState s = loop.step();
        if (loop.now > config.horizon) break;
        const auto [taken, violated] = loop.apply(s, policy.at(space.index_of(s)));
        const double cost = s.event.is_arrival() ? immediate_cost(s, taken, params) : 0.0;
        if (violated) ++stats.violations;
        if (loop.now >= config.warmup) stats.total_cost += cost;
        if (s.event.is_arrival()) {
            auto& bucket = taken == Action::ServeMbs ? stats.mbs_served : stats.sbs_served;
            ++bucket[s.event.packet_class() - 1];
        } else {
            ++stats.solar_transitions;
        }
        stats.min_energy = std::min(stats.min_energy, loop.energy);
        stats.max_energy = std::max(stats.max_energy, loop.energy);
        if (trace) trace->push_back({loop.now, s, taken, cost});
    }
    stats.avg_cost = stats.total_cost / (config.horizon - config.warmup);
    return stats;
}

SimulationResult simulate(const Policy& policy, const ValidatedParams& params,
                          const StateSpace& space, const SimConfig& config) {
    check_sim_config(config, params);
    SimulationResult result;
    result.runs.reserve(config.runs);
    for (int i = 0; i < config.runs; ++i) {
        const std::uint64_t seed = derive_sub_seed(config.master_seed, i);
        result.runs.push_back(simulate_run(policy, params, space, config, seed));
    }
    double mean = 0.0;
    for (const RunStats& r : result.runs) mean += r.avg_cost;
    mean /= config.runs;
    double var = 0.0;
    for (const RunStats& r : result.runs) var += (r.avg_cost - mean) * (r.avg_cost - mean);
    result.mean_avg_cost = mean;
    result.stddev_avg_cost = config.runs > 1 ? std::sqrt(var / (config.runs - 1)) : 0.0;
    return result;
}

EmpiricalKernelReport empirical_kernel_check(const Policy& policy, const ValidatedParams& params,
                                             const StateSpace& space, const EmbeddedKernel& kernel,
                                             const SimConfig& config, long events,
                                             long min_visits) {
    if (events < 1) throw std::invalid_argument("events must be at least 1");
    if (static_cast<int>(policy.actions.size()) != space.size())
        throw std::invalid_argument("policy does not cover the state space");

    EventLoop loop(params, space, derive_sub_seed(config.master_seed, 0),
                   config.initial_solar_state,
                   initial_energy_or_default(params, config.initial_energy),
                   config.battery_mode);
    loop.draw_clocks();

    // pair index -> successor -> count
    std::vector<std::map<std::int32_t, long>> counts(kernel.pairs.pair_count());
    int prev_pair = -1;
    for (long i = 0; i <= events; ++i) {
        const DecisionState s = loop.step();
        const int state_index = space.index_of(s);
        if (prev_pair >= 0) ++counts[prev_pair][state_index];
        const auto [taken, violated] = loop.apply(s, policy.at(state_index));
        (void)violated;
        prev_pair = kernel.pairs.pair_index(state_index, taken);
    }

    EmpiricalKernelReport report;
    report.events = events;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        long visits = 0;
        for (const auto& [succ, c] : counts[p]) visits += c;
        if (visits < min_visits) {
            if (visits > 0) ++report.rows_skipped;
            continue;
        }
        const TransitionRow row = kernel.pairs.row(p);
        double l1 = 0.0;
        double expected_l1 = 0.0;  // multinomial concentration scale
        for (std::size_t j = 0; j < row.successors.size(); ++j) {
            const double prob = row.probabilities[j];
            auto it = counts[p].find(row.successors[j]);
            const double freq = it == counts[p].end() ? 0.0 : double(it->second) / visits;
            l1 += std::abs(freq - prob);
            expected_l1 += std::sqrt(2.0 * prob * (1.0 - prob) / (M_PI * double(visits)));
        }
        for (const auto& [succ, c] : counts[p])  // observed successors outside the row
            if (row.probability_to(succ) == 0.0) l1 += double(c) / visits;
        ++report.rows_compared;
        report.max_l1 = std::max(report.max_l1, l1);
        if (expected_l1 > 0.0)
            report.max_l1_bound_ratio = std::max(report.max_l1_bound_ratio, l1 / (3.0 * expected_l1));
    }
    return report;
}

DiscountedEstimate discounted_cost_estimate(const Policy& policy, const ValidatedParams& params,
                                            const StateSpace& space, double alpha, double horizon,
                                            int runs, std::uint64_t master_seed,
                                            int initial_solar_state, int initial_battery,
                                            std::optional<Event> initial_event) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be at least 1");
    if (initial_battery < 0 || initial_battery > params.battery_units())
        throw std::invalid_argument("initial battery out of range");

    double max_cost = 0.0;
    for (int n = 1; n <= params.class_count(); ++n)
        max_cost = std::max(max_cost, std::max(params.grid_price() * params.mbs_cost_units(n),
                                               params.solar_price() * params.sbs_cost_units(n)));

    std::vector<double> totals(runs, 0.0);
    for (int i = 0; i < runs; ++i) {
        EventLoop loop(params, space, derive_sub_seed(master_seed, i), initial_solar_state,
                       initial_battery * params.battery_unit(), BatteryMode::Quantized);
        Event first = initial_event.value_or(Event::solar_change());
        if (!initial_event.has_value()) {
            // Draw the t = 0 event from the exponential race at (r0, m0).
            const double gamma =
                params.total_arrival_rate() + params.transition_rate(initial_solar_state);
            double u = loop.rng.uniform() * gamma;
            first = Event::solar_change();
            for (int n = 1; n <= params.class_count(); ++n) {
                if (u < params.arrival_rate(n)) {
                    first = Event::arrival(n);
                    break;
                }
                u -= params.arrival_rate(n);
            }
        }
        DecisionState s0{initial_solar_state, initial_battery, first};
        // Process the initial epoch at t = 0, then draw fresh clocks (all
        // streams are memoryless, so post-epoch clocks start fresh).
        double discounted = 0.0;
        Action a0 = policy.at(space.index_of(s0));
        if (s0.event.is_arrival()) {
            const int units = params.sbs_cost_units(s0.event.packet_class());
            if (a0 == Action::ServeSbs && s0.battery < units) a0 = Action::ServeMbs;
            if (a0 == Action::ServeSbs)
                loop.energy = std::max(0.0, loop.energy - units * params.battery_unit());
            discounted += immediate_cost(s0, a0, params);
        } else {
            loop.solar = params.next_solar_state(loop.solar);
        }
        loop.draw_clocks();
        while (true) {
            const DecisionState s = loop.step();
            if (loop.now > horizon) break;
            const auto [taken, violated] = loop.apply(s, policy.at(space.index_of(s)));
            (void)violated;
            if (s.event.is_arrival())
                discounted += std::exp(-alpha * loop.now) * immediate_cost(s, taken, params);
        }
        totals[i] = discounted;
    }

    DiscountedEstimate est;
    est.runs = runs;
    for (double x : totals) est.mean += x;
    est.mean /= runs;
    double var = 0.0;
    for (double x : totals) var += (x - est.mean) * (x - est.mean);
    est.std_error = runs > 1 ? std::sqrt(var / (runs - 1) / runs) : 0.0;
    const double gamma_max = params.uniformization_rate();
    est.truncation_bound = std::exp(-alpha * horizon) * max_cost * gamma_max / alpha;
    est.horizon_warning = std::exp(-alpha * horizon) >= 1e-6;
    return est;
}

}  // namespace solsched
