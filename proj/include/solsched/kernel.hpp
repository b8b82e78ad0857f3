#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "solsched/state_space.hpp"

namespace solsched {

/// View of one (state, action) row of a transition law.
struct TransitionRow {
    int source = 0;
    Action action = Action::ServeMbs;
    std::span<const std::int32_t> successors;
    std::span<const double> probabilities;
    double event_rate = 0.0;  // gamma(s, a)
    double cost = 0.0;        // c(s, a) as stored (embedded/discounted), c~ (uniformized)

    double expected_sojourn() const { return 1.0 / event_rate; }
    double sum() const {
        double s = 0.0;
        for (double p : probabilities) s += p;
        return s;
    }
    double probability_to(int successor) const {
        for (std::size_t i = 0; i < successors.size(); ++i)
            if (successors[i] == successor) return probabilities[i];
        return 0.0;
    }
};

/// CSR storage for one row per admissible (state, action) pair.
/// Pairs are ordered by state index, then ascending action code, so output
/// is deterministic. Immutable once built.
class PairTable {
  public:
    int pair_count() const { return static_cast<int>(source_.size()); }
    int state_count() const { return static_cast<int>(state_begin_.size()) - 1; }

    TransitionRow row(int pair) const {
        const std::size_t b = offsets_[pair], e = offsets_[pair + 1];
        return {source_[pair],
                action_[pair],
                {successors_.data() + b, e - b},
                {probabilities_.data() + b, e - b},
                event_rate_[pair],
                cost_[pair]};
    }

    /// Pairs of state s occupy [pairs_begin(s), pairs_end(s)).
    int pairs_begin(int state) const { return state_begin_[state]; }
    int pairs_end(int state) const { return state_begin_[state + 1]; }

    /// Pair index for (state, action); -1 if the action is not admissible.
    int pair_index(int state, Action a) const {
        for (int p = pairs_begin(state); p < pairs_end(state); ++p)
            if (action_[p] == a) return p;
        return -1;
    }

    // Raw columns for the sweep kernels.
    const std::int32_t* successor_data(int pair) const { return successors_.data() + offsets_[pair]; }
    const double* probability_data(int pair) const { return probabilities_.data() + offsets_[pair]; }
    std::size_t row_length(int pair) const { return offsets_[pair + 1] - offsets_[pair]; }
    double event_rate(int pair) const { return event_rate_[pair]; }
    double cost(int pair) const { return cost_[pair]; }
    int source(int pair) const { return source_[pair]; }
    Action action(int pair) const { return action_[pair]; }

  private:
    friend class PairTableBuilder;
    std::vector<std::size_t> offsets_;        // pair -> entry range
    std::vector<std::int32_t> successors_;
    std::vector<double> probabilities_;
    std::vector<std::int32_t> source_;
    std::vector<Action> action_;
    std::vector<double> event_rate_;
    std::vector<double> cost_;
    std::vector<std::int32_t> state_begin_;   // state -> first pair
};

/// Embedded SMDP transition law P_a(s'|s) with rates and sojourns.
struct EmbeddedKernel {
    PairTable pairs;
};

/// Uniformized chain: P~ rows (self-loop augmented), costs scaled to
/// c~ = c * gamma / phi.
struct UniformizedKernel {
    PairTable pairs;
    double uniform_rate = 0.0;  // phi
};

/// Discounted transform m_a(s'|s); rows sum to gamma/(gamma+alpha), costs
/// are the raw immediate costs.
struct DiscountedKernel {
    PairTable pairs;
    double discount_rate = 0.0;  // alpha
};

/// Post-action configuration: the radiation state governing the next sojourn
/// and the battery level right after the action. The MBS leaves both alone;
/// the SBS deducts xi_n units at the epoch; the fictitious action advances
/// the radiation state circularly (charging and the next radiation change
/// both run at the new state's parameters).
struct PostActionConfig {
    int solar_state = 0;   // r_eff
    int battery = 0;       // m0
};
PostActionConfig post_action_configuration(const DecisionState& s, Action a,
                                           const ValidatedParams& params);

/// One embedded row built standalone (convenience for tests and spot checks;
/// the same arithmetic backs build_embedded_kernel).
struct OwnedRow {
    std::vector<std::int32_t> successors;
    std::vector<double> probabilities;
    double event_rate = 0.0;
    double cost = 0.0;
    double expected_sojourn() const { return 1.0 / event_rate; }
    double sum() const {
        double s = 0.0;
        for (double p : probabilities) s += p;
        return s;
    }
    double probability_to(int successor) const {
        for (std::size_t i = 0; i < successors.size(); ++i)
            if (successors[i] == successor) return probabilities[i];
        return 0.0;
    }
};
OwnedRow build_transition_row(const DecisionState& s, Action a, const ValidatedParams& params,
                              const StateSpace& space);

EmbeddedKernel build_embedded_kernel(const ValidatedParams& params, const StateSpace& space);
UniformizedKernel uniformize(const EmbeddedKernel& kernel, const ValidatedParams& params);
DiscountedKernel build_discounted_kernel(const ValidatedParams& params, const StateSpace& space);

}  // namespace solsched
