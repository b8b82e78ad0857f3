#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "solsched/params.hpp"

namespace solsched {

/// Scheduling decision attached to an event.
/// Numeric codes follow the action-space convention: MBS = 0, SBS = 1,
/// fictitious (solar transition bookkeeping) = -1.
enum class Action : int {
    Fictitious = -1,
    ServeMbs = 0,
    ServeSbs = 1,
};

int action_code(Action a);
Action action_from_code(int code);
std::string to_string(Action a);

/// Event observed at a decision epoch: a class-n packet arrival or a solar
/// radiation state change.
class Event {
  public:
    static Event arrival(int packet_class) { return Event(packet_class - 1); }
    static Event solar_change() { return Event(kSolar); }

    bool is_arrival() const { return code_ != kSolar; }
    /// 1-based packet class; only valid for arrivals.
    int packet_class() const { return code_ + 1; }

    bool operator==(const Event&) const = default;

  private:
    explicit Event(int code) : code_(code) {}
    static constexpr int kSolar = -1;
    int code_;
};

std::string to_string(const Event& e);

/// SMDP decision-making state <[r, m], e>.
struct DecisionState {
    int solar_state = 0;   // r in 0..R
    int battery = 0;       // m in 0..M
    Event event = Event::solar_change();

    bool operator==(const DecisionState&) const = default;
};

std::string to_string(const DecisionState& s);

/// Set of actions admissible in one state (at most two entries).
class ActionSet {
  public:
    void add(Action a) { actions_[size_++] = a; }
    int size() const { return size_; }
    Action operator[](int i) const { return actions_[i]; }
    bool contains(Action a) const {
        for (int i = 0; i < size_; ++i)
            if (actions_[i] == a) return true;
        return false;
    }
    const Action* begin() const { return actions_.data(); }
    const Action* end() const { return actions_.data() + size_; }

  private:
    std::array<Action, 2> actions_{};
    int size_ = 0;
};

/// Dense enumeration of the decision-state space, lexicographic in
/// (r, m, event) with packet classes 1..N before the solar-change event.
/// |S| = (R+1)(M+1)(N+1); index 0 is <[0,0], e_1>.
class StateSpace {
  public:
    static StateSpace of(const ValidatedParams& params);
    StateSpace(int solar_states, int battery_units, int packet_classes);

    int size() const { return size_; }
    int solar_states() const { return solar_states_; }
    int battery_units() const { return battery_units_; }   // M
    int packet_classes() const { return packet_classes_; }

    int index_of(const DecisionState& s) const;
    DecisionState state_at(int index) const;

  private:
    int solar_states_;
    int battery_units_;
    int packet_classes_;
    int size_;
};

/// Actions available in state s: solar-change events force the fictitious
/// action; packet arrivals always admit the MBS and admit the SBS when the
/// battery holds at least xi_n units.
ActionSet admissible_actions(const DecisionState& s, const ValidatedParams& params);

/// Immediate cost of (s, a): omega_m * zeta_n for the MBS, omega_s * xi_n for
/// the SBS, 0 for the fictitious action. Throws std::invalid_argument if a is
/// not admissible in s.
double immediate_cost(const DecisionState& s, Action a, const ValidatedParams& params);

}  // namespace solsched
