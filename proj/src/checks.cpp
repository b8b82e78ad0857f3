#include "solsched/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "solsched/quadrature.hpp"
#include "solsched/rng.hpp"

namespace solsched::checks {

namespace {

CheckResult bounded(std::string name, double measured, double threshold, std::string details = "") {
    return {std::move(name), measured <= threshold, measured, threshold, std::move(details)};
}

}  // namespace

CheckResult row_sums_embedded(const EmbeddedKernel& kernel) {
    double worst = 0.0;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p)
        worst = std::max(worst, std::abs(kernel.pairs.row(p).sum() - 1.0));
    return bounded("embedded row sums", worst, 1e-12);
}

CheckResult row_sums_uniformized(const UniformizedKernel& kernel) {
    double worst = 0.0;
    double min_entry = 0.0;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        worst = std::max(worst, std::abs(row.sum() - 1.0));
        for (double prob : row.probabilities) min_entry = std::min(min_entry, prob);
    }
    CheckResult res = bounded("uniformized row sums", worst, 1e-12);
    if (min_entry < 0.0) {
        res.passed = false;
        res.details = "negative self-loop mass " + std::to_string(min_entry);
    }
    return res;
}

CheckResult row_mass_discounted(const DiscountedKernel& kernel) {
    double worst = 0.0;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        const double target = row.event_rate / (row.event_rate + kernel.discount_rate);
        worst = std::max(worst, std::abs(row.sum() - target));
    }
    return bounded("discounted row masses", worst, 1e-12);
}

CheckResult battery_monotonicity(const EmbeddedKernel& kernel, const StateSpace& space,
                                 const ValidatedParams& params) {
    long violations = 0;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        const auto post =
            post_action_configuration(space.state_at(row.source), row.action, params);
        for (std::int32_t succ : row.successors) {
            const DecisionState next = space.state_at(succ);
            if (next.battery < post.battery || next.battery > space.battery_units() ||
                next.solar_state != post.solar_state)
                ++violations;
        }
    }
    return bounded("battery monotonicity", double(violations), 0.0);
}

CheckResult event_marginals(const EmbeddedKernel& kernel, const StateSpace& space,
                            const ValidatedParams& params) {
    double worst = 0.0;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        const auto post =
            post_action_configuration(space.state_at(row.source), row.action, params);
        for (int n = 0; n <= space.packet_classes(); ++n) {
            const bool arrival = n < space.packet_classes();
            const double mu = arrival ? params.arrival_rate(n + 1)
                                      : params.transition_rate(post.solar_state);
            double mass = 0.0;
            for (std::size_t j = 0; j < row.successors.size(); ++j) {
                const DecisionState next = space.state_at(row.successors[j]);
                const bool match = arrival ? (next.event.is_arrival() &&
                                              next.event.packet_class() == n + 1)
                                           : !next.event.is_arrival();
                if (match) mass += row.probabilities[j];
            }
            worst = std::max(worst, std::abs(mass - mu / row.event_rate));
        }
    }
    return bounded("event marginals", worst, 1e-12);
}

CheckResult quadrature_spot_check(const EmbeddedKernel& embedded, const DiscountedKernel* discounted,
                                  const StateSpace& space, const ValidatedParams& params,
                                  int samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    const auto sample_from = [&](const PairTable& pairs, double alpha) {
        const int p = static_cast<int>(rng.next_u64() % pairs.pair_count());
        const TransitionRow row = pairs.row(p);
        const std::size_t j = rng.next_u64() % row.successors.size();
        const auto post = post_action_configuration(space.state_at(row.source), row.action, params);
        const DecisionState next = space.state_at(row.successors[j]);
        const double mu = next.event.is_arrival() ? params.arrival_rate(next.event.packet_class())
                                                  : params.transition_rate(post.solar_state);
        const double reference = quadrature_transition_mass(
            mu, row.event_rate, params.unit_charge_time(post.solar_state), post.battery,
            space.battery_units(), next.battery, alpha);
        worst = std::max(worst, std::abs(row.probabilities[j] - reference));
    };
    for (int i = 0; i < samples; ++i) {
        sample_from(embedded.pairs, 0.0);
        if (discounted) sample_from(discounted->pairs, discounted->discount_rate);
    }
    return bounded("quadrature spot check", worst, 1e-9);
}

CheckResult admissible_pair_count(const EmbeddedKernel& kernel, const StateSpace& space,
                                  const ValidatedParams& params) {
    long expected = 0;
    for (int s = 0; s < space.size(); ++s)
        expected += admissible_actions(space.state_at(s), params).size();
    const long actual = kernel.pairs.pair_count();
    CheckResult res = bounded("admissible pair count", std::abs(double(actual - expected)), 0.0);
    res.details = std::to_string(actual) + " pairs";
    return res;
}

namespace {

double bellman_residual(const PairTable& pairs, const std::vector<double>& values, double offset) {
    double worst = 0.0;
    for (int s = 0; s < pairs.state_count(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (int p = pairs.pairs_begin(s); p < pairs.pairs_end(s); ++p) {
            double q = pairs.cost(p) + offset;
            const auto* succ = pairs.successor_data(p);
            const auto* prob = pairs.probability_data(p);
            for (std::size_t j = 0; j < pairs.row_length(p); ++j) q += prob[j] * values[succ[j]];
            best = std::min(best, q);
        }
        worst = std::max(worst, std::abs(values[s] - best));
    }
    return worst;
}

}  // namespace

CheckResult bellman_residual_average(const AverageSolveResult& result,
                                     const UniformizedKernel& kernel, const SolverConfig& config) {
    const double resid = bellman_residual(kernel.pairs, result.values,
                                          -result.values[config.reference_state]);
    return bounded("average-criterion Bellman residual", resid, 10.0 * config.tolerance);
}

CheckResult bellman_residual_discounted(const DiscountedSolveResult& result,
                                        const DiscountedKernel& kernel,
                                        const SolverConfig& config) {
    const double resid = bellman_residual(kernel.pairs, result.values, 0.0);
    return bounded("discounted-criterion Bellman residual", resid, 10.0 * config.tolerance);
}

CheckResult policy_admissible(const Policy& policy, const StateSpace& space,
                              const ValidatedParams& params) {
    const auto bad = first_inadmissible_state(policy, space, params);
    CheckResult res = bounded("policy admissibility (" + policy.provenance + ")",
                              bad.has_value() ? 1.0 : 0.0, 0.0);
    if (bad) res.details = "state " + std::to_string(*bad);
    return res;
}

CheckResult threshold_structure(const Policy& policy, const StateSpace& space) {
    long violations = 0;
    for (int n = 1; n <= space.packet_classes(); ++n)
        for (int r = 0; r < space.solar_states(); ++r) {
            bool seen_sbs = false;
            for (int m = 0; m <= space.battery_units(); ++m) {
                const Action a = policy.actions[space.index_of({r, m, Event::arrival(n)})];
                if (a == Action::ServeSbs) seen_sbs = true;
                else if (seen_sbs) ++violations;
            }
        }
    return bounded("threshold structure (" + policy.provenance + ")", double(violations), 0.0);
}

CheckResult empirical_kernel(const Policy& policy, const ValidatedParams& params,
                             const StateSpace& space, const EmbeddedKernel& kernel,
                             const SimConfig& config, long events, long min_visits) {
    const EmpiricalKernelReport report =
        empirical_kernel_check(policy, params, space, kernel, config, events, min_visits);
    CheckResult res = bounded("empirical kernel frequencies", report.max_l1_bound_ratio, 1.0);
    std::ostringstream os;
    os << "max L1 " << report.max_l1 << " over " << report.rows_compared << " rows ("
       << report.rows_skipped << " below " << min_visits << " visits)";
    res.details = os.str();
    return res;
}

CheckResult gain_vs_simulation(double gain, const SimulationResult& sim, double rel_tol) {
    const double rel = std::abs(sim.mean_avg_cost - gain) / gain;
    CheckResult res = bounded("gain vs simulation", rel, rel_tol);
    res.details = "g=" + std::to_string(gain) + " sim=" + std::to_string(sim.mean_avg_cost);
    return res;
}

CheckResult arrival_count_sanity(const SimulationResult& sim, const ValidatedParams& params,
                                 const SimConfig& config) {
    double worst = 0.0;
    const double window = config.horizon;  // counts cover the whole run
    for (const RunStats& run : sim.runs)
        for (int n = 1; n <= params.class_count(); ++n) {
            const double expect = params.arrival_rate(n) * window;
            const double got = double(run.mbs_served[n - 1] + run.sbs_served[n - 1]);
            worst = std::max(worst, std::abs(got - expect) / (4.0 * std::sqrt(expect)));
        }
    return bounded("arrival count sanity", worst, 1.0);
}

std::vector<CheckResult> run_all(const ValidatedParams& params, const StateSpace& space,
                                 const SolverConfig& solver_config, const SimConfig& sim_config,
                                 long empirical_events) {
    std::vector<CheckResult> out;
    const EmbeddedKernel embedded = build_embedded_kernel(params, space);
    const UniformizedKernel uniformized = uniformize(embedded, params);
    const bool discountable = params.discount_rate() > 0.0;
    DiscountedKernel discounted;
    if (discountable) discounted = build_discounted_kernel(params, space);

    out.push_back(row_sums_embedded(embedded));
    out.push_back(row_sums_uniformized(uniformized));
    if (discountable) out.push_back(row_mass_discounted(discounted));
    out.push_back(battery_monotonicity(embedded, space, params));
    out.push_back(event_marginals(embedded, space, params));
    out.push_back(quadrature_spot_check(embedded, discountable ? &discounted : nullptr, space,
                                        params, 20, 20240901));
    out.push_back(admissible_pair_count(embedded, space, params));

    const AverageSolveResult avg = solve_average_rvi(uniformized, solver_config);
    out.push_back(bellman_residual_average(avg, uniformized, solver_config));
    out.push_back(policy_admissible(avg.policy, space, params));
    out.push_back(threshold_structure(avg.policy, space));
    if (discountable) {
        const DiscountedSolveResult disc = solve_discounted_vi(discounted, solver_config);
        out.push_back(bellman_residual_discounted(disc, discounted, solver_config));
        out.push_back(policy_admissible(disc.policy, space, params));
        out.push_back(threshold_structure(disc.policy, space));
    }
    const Policy greedy = greedy_policy(params, space);
    out.push_back(policy_admissible(greedy, space, params));
    out.push_back(threshold_structure(greedy, space));

    // Optimality dominance.
    const double g_greedy = evaluate_policy_average(greedy, uniformized, solver_config).gain;
    const double g_mbs =
        evaluate_policy_average(all_mbs_policy(params, space), uniformized, solver_config).gain;
    CheckResult dom = bounded("optimality dominance",
                              std::max(avg.gain - g_greedy, avg.gain - g_mbs), 1e-8);
    dom.details = "g*=" + std::to_string(avg.gain) + " greedy=" + std::to_string(g_greedy) +
                  " all-mbs=" + std::to_string(g_mbs);
    out.push_back(dom);

    out.push_back(empirical_kernel(greedy, params, space, embedded, sim_config, empirical_events));

    const SimulationResult sim = simulate(avg.policy, params, space, sim_config);
    out.push_back(gain_vs_simulation(avg.gain, sim, 0.02));
    out.push_back(arrival_count_sanity(sim, params, sim_config));
    return out;
}

}  // namespace solsched::checks
