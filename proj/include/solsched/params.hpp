#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace solsched {

/// Solar radiation process: a circular CTMC over R+1 intensity states.
struct SolarModel {
    std::vector<double> intensities;           // G_r, W/m^2
    std::vector<double> cloud_mean_diameters;  // d_r, m
    double wind_speed = 0.0;                   // v_w, m/s
    double panel_area = 0.0;                   // m^2
    double conversion_efficiency = 0.0;        // (0, 1]
};

struct BatteryModel {
    double capacity = 0.0;  // E, joules
    double unit = 0.0;      // E_min, joules per charge/discharge step
};

struct TrafficClass {
    double arrival_rate = 0.0;  // packets/s
    int mbs_cost_units = 0;     // grid energy units per packet
    int sbs_cost_units = 0;     // battery units per packet
};

struct TrafficModel {
    std::vector<TrafficClass> classes;
};

struct EconomicParams {
    double grid_price = 0.0;     // per grid energy unit
    double solar_price = 0.0;    // per battery unit
    double discount_rate = 0.0;  // alpha, 1/s (discounted criterion only)
};

struct SystemParams {
    SolarModel solar;
    BatteryModel battery;
    TrafficModel traffic;
    EconomicParams economics;
};

struct ValidationIssue {
    std::string field;
    std::string message;
    bool hard = true;
};

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }

  private:
    std::vector<ValidationIssue> issues_;
};

/// Validated parameter set with all derived quantities precomputed.
/// Immutable after construction; safe to share across threads.
class ValidatedParams {
  public:
    /// Validates `raw` and precomputes derived quantities.
    /// Throws ValidationError carrying every hard violation found; soft
    /// violations are kept as warnings().
    static ValidatedParams validate(const SystemParams& raw);

    const SystemParams& raw() const { return raw_; }

    int solar_state_count() const { return static_cast<int>(raw_.solar.intensities.size()); }
    int max_solar_state() const { return solar_state_count() - 1; }  // R
    int class_count() const { return static_cast<int>(raw_.traffic.classes.size()); }
    int battery_units() const { return battery_units_; }  // M

    double intensity(int r) const { return raw_.solar.intensities.at(r); }
    double transition_rate(int r) const { return beta_.at(r); }           // beta_r, 1/s
    double expected_sojourn(int r) const { return 1.0 / beta_.at(r); }    // tau_r, s
    double charge_power(int r) const { return power_.at(r); }            // p_r, W
    /// Seconds to harvest one battery unit; +inf when p_r = 0.
    double unit_charge_time(int r) const { return unit_time_.at(r); }    // T_r

    double arrival_rate(int cls) const { return raw_.traffic.classes.at(cls - 1).arrival_rate; }
    int mbs_cost_units(int cls) const { return raw_.traffic.classes.at(cls - 1).mbs_cost_units; }
    int sbs_cost_units(int cls) const { return raw_.traffic.classes.at(cls - 1).sbs_cost_units; }

    double total_arrival_rate() const { return total_arrival_rate_; }    // sum of lambda_n
    double uniformization_rate() const { return uniformization_rate_; }  // phi
    int next_solar_state(int r) const { return (r + 1) % solar_state_count(); }

    double grid_price() const { return raw_.economics.grid_price; }
    double solar_price() const { return raw_.economics.solar_price; }
    double discount_rate() const { return raw_.economics.discount_rate; }

    double battery_capacity() const { return raw_.battery.capacity; }
    double battery_unit() const { return raw_.battery.unit; }

    const std::vector<ValidationIssue>& warnings() const { return warnings_; }

  private:
    ValidatedParams() = default;

    SystemParams raw_;
    std::vector<double> beta_;
    std::vector<double> power_;
    std::vector<double> unit_time_;
    int battery_units_ = 0;
    double total_arrival_rate_ = 0.0;
    double uniformization_rate_ = 0.0;
    std::vector<ValidationIssue> warnings_;
};

}  // namespace solsched
