#include "solsched/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "solsched/simd/backend.hpp"

namespace solsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const SolverConfig& config, int state_count) {
    if (!(config.tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (config.reference_state < 0 || config.reference_state >= state_count)
        throw std::invalid_argument("reference_state out of range");
}

/// One Bellman sweep: w[s] = min over the state's pairs of
/// cost(p) + offset + sum P(p) * v. Pairs of a state are ordered by action
/// code, and only a strict improvement replaces the incumbent, so exact value
/// ties resolve to the lower action code (MBS before SBS).
void min_sweep(const PairTable& pairs, const double* v, double offset, double* w) {
    const auto& be = simd::active_backend();
    const int states = pairs.state_count();
    for (int s = 0; s < states; ++s) {
        double best = kInf;
        for (int p = pairs.pairs_begin(s); p < pairs.pairs_end(s); ++p) {
            const double q = pairs.cost(p) + offset +
                             be.dot_indexed(pairs.probability_data(p), pairs.successor_data(p),
                                            pairs.row_length(p), v);
            if (q < best) best = q;
        }
        w[s] = best;
    }
}

void fixed_sweep(const PairTable& pairs, const std::vector<int>& pair_of_state, const double* v,
                 double offset, double* w) {
    const auto& be = simd::active_backend();
    const int states = pairs.state_count();
    for (int s = 0; s < states; ++s) {
        const int p = pair_of_state[s];
        w[s] = pairs.cost(p) + offset +
               be.dot_indexed(pairs.probability_data(p), pairs.successor_data(p),
                              pairs.row_length(p), v);
    }
}

/// Argmin extraction with runner-up gap diagnostics.
Policy extract_policy(const PairTable& pairs, const double* v, double offset,
                      const SolverConfig& config, std::string provenance,
                      std::vector<TieDiagnostic>& ties) {
    const auto& be = simd::active_backend();
    const int states = pairs.state_count();
    Policy policy{std::vector<Action>(states, Action::Fictitious), std::move(provenance)};
    for (int s = 0; s < states; ++s) {
        double best = kInf, second = kInf;
        Action best_action = Action::Fictitious;
        for (int p = pairs.pairs_begin(s); p < pairs.pairs_end(s); ++p) {
            const double q = pairs.cost(p) + offset +
                             be.dot_indexed(pairs.probability_data(p), pairs.successor_data(p),
                                            pairs.row_length(p), v);
            if (q < best) {
                second = best;
                best = q;
                best_action = pairs.action(p);
            } else if (q < second) {
                second = q;
            }
        }
        policy.actions[s] = best_action;
        if (second < kInf && second - best <= config.tie_tolerance)
            ties.push_back({s, second - best});
    }
    return policy;
}

struct IterationState {
    std::vector<double> v, w, diff;
    double span = kInf;
    double diff_lo = 0.0, diff_hi = 0.0;
    long iterations = 0;
};

}  // namespace

std::optional<int> first_inadmissible_state(const Policy& policy, const StateSpace& space,
                                            const ValidatedParams& params) {
    if (static_cast<int>(policy.actions.size()) != space.size()) return space.size();
    for (int s = 0; s < space.size(); ++s)
        if (!admissible_actions(space.state_at(s), params).contains(policy.actions[s])) return s;
    return std::nullopt;
}

AverageSolveResult solve_average_rvi(const UniformizedKernel& kernel, const SolverConfig& config) {
    const PairTable& pairs = kernel.pairs;
    const int states = pairs.state_count();
    check_config(config, states);
    const auto& be = simd::active_backend();

    AverageSolveResult result;
    IterationState it;
    it.v.assign(states, 0.0);
    it.w.assign(states, 0.0);
    it.diff.assign(states, 0.0);
    double vref = 0.0;
    while (true) {
        ++it.iterations;
        vref = it.v[config.reference_state];
        min_sweep(pairs, it.v.data(), -vref, it.w.data());
        be.subtract(it.w.data(), it.v.data(), states, it.diff.data());
        be.minmax(it.diff.data(), states, it.diff_lo, it.diff_hi);
        it.span = it.diff_hi - it.diff_lo;
        if (config.record_spans) result.spans.push_back(it.span);
        std::swap(it.v, it.w);
        if (it.span < config.tolerance) break;
        if (it.iterations >= config.max_iterations)
            throw SolveError("relative value iteration did not converge", it.iterations, it.span);
    }

    // Bellman increments of the last sweep are diff + vref; the increment at
    // the reference state recovers the gain, its range brackets it.
    const double phi = kernel.uniform_rate;
    result.gain = phi * it.v[config.reference_state];
    result.gain_lower = phi * (it.diff_lo + vref);
    result.gain_upper = phi * (it.diff_hi + vref);
    result.iterations = it.iterations;
    result.final_span = it.span;
    result.policy = extract_policy(pairs, it.v.data(), -it.v[config.reference_state], config,
                                   "rvi-average", result.ties);
    result.values = std::move(it.v);
    return result;
}

DiscountedSolveResult solve_discounted_vi(const DiscountedKernel& kernel,
                                          const SolverConfig& config) {
    const PairTable& pairs = kernel.pairs;
    const int states = pairs.state_count();
    check_config(config, states);
    const auto& be = simd::active_backend();

    DiscountedSolveResult result;
    IterationState it;
    it.v.assign(states, 0.0);
    it.w.assign(states, 0.0);
    it.diff.assign(states, 0.0);
    while (true) {
        ++it.iterations;
        min_sweep(pairs, it.v.data(), 0.0, it.w.data());
        be.subtract(it.w.data(), it.v.data(), states, it.diff.data());
        be.minmax(it.diff.data(), states, it.diff_lo, it.diff_hi);
        it.span = it.diff_hi - it.diff_lo;
        if (config.record_spans) result.spans.push_back(it.span);
        std::swap(it.v, it.w);
        if (it.span < config.tolerance) break;
        if (it.iterations >= config.max_iterations)
            throw SolveError("discounted value iteration did not converge", it.iterations, it.span);
    }

    // Constant-shift extrapolation of the geometric tail left by span
    // stopping: v* ~= v + mid(diff) * q / (1 - q), q = row-mass midpoint.
    double q_lo = kInf, q_hi = -kInf;
    for (int p = 0; p < pairs.pair_count(); ++p) {
        const double q = pairs.event_rate(p) / (pairs.event_rate(p) + kernel.discount_rate);
        q_lo = std::min(q_lo, q);
        q_hi = std::max(q_hi, q);
    }
    const double q_mid = 0.5 * (q_lo + q_hi);
    const double shift = 0.5 * (it.diff_lo + it.diff_hi) * q_mid / (1.0 - q_mid);
    for (double& x : it.v) x += shift;

    result.iterations = it.iterations;
    result.final_span = it.span;
    result.policy = extract_policy(pairs, it.v.data(), 0.0, config, "vi-discounted", result.ties);
    result.values = std::move(it.v);
    return result;
}

AverageEvalResult evaluate_policy_average(const Policy& policy, const UniformizedKernel& kernel,
                                          const SolverConfig& config) {
    const PairTable& pairs = kernel.pairs;
    const int states = pairs.state_count();
    check_config(config, states);
    if (static_cast<int>(policy.actions.size()) != states)
        throw std::invalid_argument("policy does not cover the state space");
    std::vector<int> pair_of_state(states);
    for (int s = 0; s < states; ++s) {
        const int p = pairs.pair_index(s, policy.actions[s]);
        if (p < 0)
            throw std::invalid_argument("policy action not admissible at state " +
                                        std::to_string(s));
        pair_of_state[s] = p;
    }

    const auto& be = simd::active_backend();
    AverageEvalResult result;
    IterationState it;
    it.v.assign(states, 0.0);
    it.w.assign(states, 0.0);
    it.diff.assign(states, 0.0);
    while (true) {
        ++it.iterations;
        fixed_sweep(pairs, pair_of_state, it.v.data(), -it.v[config.reference_state], it.w.data());
        be.subtract(it.w.data(), it.v.data(), states, it.diff.data());
        be.minmax(it.diff.data(), states, it.diff_lo, it.diff_hi);
        it.span = it.diff_hi - it.diff_lo;
        std::swap(it.v, it.w);
        if (it.span < config.tolerance) break;
        if (it.iterations >= config.max_iterations)
            throw SolveError("policy evaluation did not converge", it.iterations, it.span);
    }
    result.gain = kernel.uniform_rate * it.v[config.reference_state];
    result.iterations = it.iterations;
    result.final_span = it.span;
    result.values = std::move(it.v);
    return result;
}

Policy greedy_policy(const ValidatedParams& params, const StateSpace& space) {
    Policy policy{std::vector<Action>(space.size(), Action::Fictitious), "greedy"};
    for (int s = 0; s < space.size(); ++s) {
        const DecisionState state = space.state_at(s);
        if (!state.event.is_arrival()) continue;
        policy.actions[s] = state.battery >= params.sbs_cost_units(state.event.packet_class())
                                ? Action::ServeSbs
                                : Action::ServeMbs;
    }
    return policy;
}

Policy all_mbs_policy(const ValidatedParams& params, const StateSpace& space) {
    (void)params;
    Policy policy{std::vector<Action>(space.size(), Action::Fictitious), "all-mbs"};
    for (int s = 0; s < space.size(); ++s)
        if (space.state_at(s).event.is_arrival()) policy.actions[s] = Action::ServeMbs;
    return policy;
}

std::string policy_table(std::span<const Policy> policies, const StateSpace& space) {
    if (policies.empty()) throw std::invalid_argument("policy_table: no policies given");
    for (const Policy& p : policies)
        if (static_cast<int>(p.actions.size()) != space.size())
            throw std::invalid_argument("policy_table: state-space mismatch");

    const int sub = static_cast<int>(policies.size());
    std::ostringstream os;
    os << "policies:";
    for (int j = 0; j < sub; ++j)
        os << " [" << j + 1 << "] "
           << (policies[j].provenance.empty() ? "custom" : policies[j].provenance);
    os << "\n";

    const int cell = 3;
    const int group_width = sub * cell;
    os << "   m";
    for (int n = 1; n <= space.packet_classes(); ++n)
        for (int r = 0; r < space.solar_states(); ++r) {
            std::string head =
                "<[" + std::to_string(r) + ",m],e" + std::to_string(n) + ">";
            os << "  " << head;
            for (int pad = static_cast<int>(head.size()); pad < group_width; ++pad) os << ' ';
        }
    os << "\n    ";
    for (int n = 1; n <= space.packet_classes(); ++n)
        for (int r = 0; r < space.solar_states(); ++r) {
            os << "  ";
            for (int j = 0; j < sub; ++j) {
                const std::string label = std::to_string(j + 1);
                for (int pad = static_cast<int>(label.size()); pad < cell; ++pad) os << ' ';
                os << label;
            }
        }
    os << "\n";
    for (int m = 0; m <= space.battery_units(); ++m) {
        std::string row = std::to_string(m);
        os << std::string(4 - row.size(), ' ') << row;
        for (int n = 1; n <= space.packet_classes(); ++n)
            for (int r = 0; r < space.solar_states(); ++r) {
                os << "  ";
                const int idx = space.index_of({r, m, Event::arrival(n)});
                for (int j = 0; j < sub; ++j) {
                    const std::string code = std::to_string(action_code(policies[j].actions[idx]));
                    for (int pad = static_cast<int>(code.size()); pad < cell; ++pad) os << ' ';
                    os << code;
                }
            }
        os << "\n";
    }
    return os.str();
}

}  // namespace solsched
