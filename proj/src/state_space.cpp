#include "solsched/state_space.hpp"

#include <cassert>
#include <stdexcept>

namespace solsched {

int action_code(Action a) { return static_cast<int>(a); }

Action action_from_code(int code) {
    switch (code) {
        case -1: return Action::Fictitious;
        case 0: return Action::ServeMbs;
        case 1: return Action::ServeSbs;
        default: throw std::invalid_argument("unknown action code " + std::to_string(code));
    }
}

std::string to_string(Action a) {
    switch (a) {
        case Action::Fictitious: return "fictitious";
        case Action::ServeMbs: return "mbs";
        case Action::ServeSbs: return "sbs";
    }
    return "?";
}

std::string to_string(const Event& e) {
    return e.is_arrival() ? "e" + std::to_string(e.packet_class()) : "solar";
}

std::string to_string(const DecisionState& s) {
    return "<[" + std::to_string(s.solar_state) + "," + std::to_string(s.battery) + "]," +
           to_string(s.event) + ">";
}

StateSpace StateSpace::of(const ValidatedParams& params) {
    return StateSpace(params.solar_state_count(), params.battery_units(), params.class_count());
}

StateSpace::StateSpace(int solar_states, int battery_units, int packet_classes)
    : solar_states_(solar_states),
      battery_units_(battery_units),
      packet_classes_(packet_classes),
      size_(solar_states * (battery_units + 1) * (packet_classes + 1)) {
    assert(solar_states >= 1 && battery_units >= 0 && packet_classes >= 1);
}

int StateSpace::index_of(const DecisionState& s) const {
    assert(s.solar_state >= 0 && s.solar_state < solar_states_);
    assert(s.battery >= 0 && s.battery <= battery_units_);
    const int event_code = s.event.is_arrival() ? s.event.packet_class() - 1 : packet_classes_;
    return (s.solar_state * (battery_units_ + 1) + s.battery) * (packet_classes_ + 1) + event_code;
}

DecisionState StateSpace::state_at(int index) const {
    assert(index >= 0 && index < size_);
    const int ne = packet_classes_ + 1;
    const int event_code = index % ne;
    const int rm = index / ne;
    DecisionState s{rm / (battery_units_ + 1), rm % (battery_units_ + 1),
                    event_code == packet_classes_ ? Event::solar_change()
                                                  : Event::arrival(event_code + 1)};
    return s;
}

ActionSet admissible_actions(const DecisionState& s, const ValidatedParams& params) {
    ActionSet set;
    if (!s.event.is_arrival()) {
        set.add(Action::Fictitious);
        return set;
    }
    set.add(Action::ServeMbs);
    if (s.battery >= params.sbs_cost_units(s.event.packet_class())) set.add(Action::ServeSbs);
    return set;
}

double immediate_cost(const DecisionState& s, Action a, const ValidatedParams& params) {
    if (!admissible_actions(s, params).contains(a))
        throw std::invalid_argument("action " + to_string(a) + " not admissible in " + to_string(s));
    switch (a) {
        case Action::ServeMbs:
            return params.grid_price() * params.mbs_cost_units(s.event.packet_class());
        case Action::ServeSbs:
            return params.solar_price() * params.sbs_cost_units(s.event.packet_class());
        case Action::Fictitious: return 0.0;
    }
    return 0.0;
}

}  // namespace solsched
