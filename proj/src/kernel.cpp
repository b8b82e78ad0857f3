#include "solsched/kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace solsched {

class PairTableBuilder {
  public:
    explicit PairTableBuilder(int state_count) {
        table_.offsets_.push_back(0);
        table_.state_begin_.assign(static_cast<std::size_t>(state_count) + 1, 0);
    }

    void add_pair(int source, Action a, const std::vector<std::int32_t>& succ,
                  const std::vector<double>& prob, double event_rate, double cost) {
        table_.source_.push_back(source);
        table_.action_.push_back(a);
        table_.event_rate_.push_back(event_rate);
        table_.cost_.push_back(cost);
        table_.successors_.insert(table_.successors_.end(), succ.begin(), succ.end());
        table_.probabilities_.insert(table_.probabilities_.end(), prob.begin(), prob.end());
        table_.offsets_.push_back(table_.successors_.size());
        table_.state_begin_[source + 1] = table_.pair_count();
    }

    PairTable finish() {
        // States are visited in index order; fill gaps for prefix semantics.
        for (std::size_t s = 1; s < table_.state_begin_.size(); ++s)
            if (table_.state_begin_[s] < table_.state_begin_[s - 1])
                table_.state_begin_[s] = table_.state_begin_[s - 1];
        return std::move(table_);
    }

  private:
    PairTable table_;
};

PostActionConfig post_action_configuration(const DecisionState& s, Action a,
                                           const ValidatedParams& params) {
    switch (a) {
        case Action::ServeMbs:
            if (!s.event.is_arrival())
                throw std::invalid_argument("MBS action on a non-arrival event");
            return {s.solar_state, s.battery};
        case Action::ServeSbs: {
            if (!s.event.is_arrival())
                throw std::invalid_argument("SBS action on a non-arrival event");
            const int units = params.sbs_cost_units(s.event.packet_class());
            if (s.battery < units)
                throw std::invalid_argument("SBS action with insufficient battery in " +
                                            to_string(s));
            return {s.solar_state, s.battery - units};
        }
        case Action::Fictitious:
            if (s.event.is_arrival())
                throw std::invalid_argument("fictitious action on a packet arrival");
            return {params.next_solar_state(s.solar_state), s.battery};
    }
    throw std::invalid_argument("unknown action");
}

namespace {

struct ScratchRow {
    std::vector<std::int32_t> successors;
    std::vector<double> probabilities;
    double event_rate = 0.0;
    double cost = 0.0;

    void push(int successor, double p) {
        if (p == 0.0) return;
        for (std::size_t i = 0; i < successors.size(); ++i) {
            if (successors[i] == successor) {
                probabilities[i] += p;  // merge duplicate successors
                return;
            }
        }
        successors.push_back(successor);
        probabilities.push_back(p);
    }
};

// Shared closed-form row construction. With rate_offset = 0 this yields the
// embedded probabilities P_a(s'|s); with rate_offset = alpha it yields the
// discounted masses m_a(s'|s) (gamma replaced by gamma+alpha inside the time
// integrals and the race prefactor).
void build_row_into(const DecisionState& s, Action a, const ValidatedParams& params,
                    const StateSpace& space, double rate_offset, ScratchRow& out) {
    const auto post = post_action_configuration(s, a, params);
    const int classes = params.class_count();
    const int max_units = params.battery_units();
    const double gamma = params.total_arrival_rate() + params.transition_rate(post.solar_state);
    const double ga = gamma + rate_offset;
    const double unit_time = params.unit_charge_time(post.solar_state);

    out.successors.clear();
    out.probabilities.clear();
    out.event_rate = gamma;
    out.cost = immediate_cost(s, a, params);

    for (int code = 0; code <= classes; ++code) {
        const bool arrival = code < classes;
        const Event next_event = arrival ? Event::arrival(code + 1) : Event::solar_change();
        const double mu =
            arrival ? params.arrival_rate(code + 1) : params.transition_rate(post.solar_state);
        if (post.battery == max_units || !std::isfinite(unit_time)) {
            // No charging headroom (battery full) or no charging (p_r = 0):
            // plain exponential race over the next event.
            out.push(space.index_of({post.solar_state, post.battery, next_event}), mu / ga);
            continue;
        }
        const int headroom = max_units - post.battery;
        for (int k = 0; k < headroom; ++k) {
            const double p =
                (mu / ga) * (std::exp(-ga * k * unit_time) - std::exp(-ga * (k + 1) * unit_time));
            out.push(space.index_of({post.solar_state, post.battery + k, next_event}), p);
        }
        out.push(space.index_of({post.solar_state, max_units, next_event}),
                 (mu / ga) * std::exp(-ga * headroom * unit_time));
    }
    if (!(gamma > 0.0))
        throw std::logic_error("nonpositive event rate for " + to_string(s));
}

PairTable build_pairs(const ValidatedParams& params, const StateSpace& space, double rate_offset) {
    PairTableBuilder builder(space.size());
    ScratchRow scratch;
    for (int i = 0; i < space.size(); ++i) {
        const DecisionState s = space.state_at(i);
        for (Action a : admissible_actions(s, params)) {
            build_row_into(s, a, params, space, rate_offset, scratch);
            builder.add_pair(i, a, scratch.successors, scratch.probabilities, scratch.event_rate,
                             scratch.cost);
        }
    }
    return builder.finish();
}

}  // namespace

OwnedRow build_transition_row(const DecisionState& s, Action a, const ValidatedParams& params,
                              const StateSpace& space) {
    ScratchRow scratch;
    build_row_into(s, a, params, space, 0.0, scratch);
    return {std::move(scratch.successors), std::move(scratch.probabilities), scratch.event_rate,
            scratch.cost};
}

EmbeddedKernel build_embedded_kernel(const ValidatedParams& params, const StateSpace& space) {
    return {build_pairs(params, space, 0.0)};
}

UniformizedKernel uniformize(const EmbeddedKernel& kernel, const ValidatedParams& params) {
    const double phi = params.uniformization_rate();
    PairTableBuilder builder(kernel.pairs.state_count());
    std::vector<std::int32_t> succ;
    std::vector<double> prob;
    for (int p = 0; p < kernel.pairs.pair_count(); ++p) {
        const TransitionRow row = kernel.pairs.row(p);
        const double scale = row.event_rate / phi;
        succ.assign(row.successors.begin(), row.successors.end());
        prob.assign(row.probabilities.size(), 0.0);
        double self_mass = 1.0 - scale;  // phi >= gamma by construction
        bool has_self = false;
        for (std::size_t i = 0; i < prob.size(); ++i) {
            prob[i] = row.probabilities[i] * scale;
            if (succ[i] == row.source) {
                prob[i] += self_mass;
                has_self = true;
            }
        }
        if (!has_self) {  // explicit self-loop entry, possibly zero mass
            succ.push_back(row.source);
            prob.push_back(self_mass);
        }
        builder.add_pair(row.source, row.action, succ, prob, row.event_rate,
                         row.cost * row.event_rate / phi);
    }
    return {builder.finish(), phi};
}

DiscountedKernel build_discounted_kernel(const ValidatedParams& params, const StateSpace& space) {
    const double alpha = params.discount_rate();
    if (!(alpha > 0.0))
        throw std::invalid_argument("discounted kernel requires a positive discount_rate");
    return {build_pairs(params, space, alpha), alpha};
}

}  // namespace solsched
