#include "solsched/params.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace solsched {

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::ostringstream os;
    os << "invalid system parameters:";
    for (const auto& issue : issues)
        if (issue.hard) os << "\n  " << issue.field << ": " << issue.message;
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ValidatedParams ValidatedParams::validate(const SystemParams& raw) {
    std::vector<ValidationIssue> hard;
    std::vector<ValidationIssue> soft;
    auto fail = [&](std::string field, std::string msg) {
        hard.push_back({std::move(field), std::move(msg), true});
    };
    auto warn = [&](std::string field, std::string msg) {
        soft.push_back({std::move(field), std::move(msg), false});
    };

    const auto& sol = raw.solar;
    if (sol.intensities.empty()) fail("solar.intensities", "at least one radiation state required");
    if (sol.intensities.size() != sol.cloud_mean_diameters.size())
        fail("solar.cloud_mean_diameters", "must have one entry per radiation state");
    for (std::size_t r = 0; r < sol.intensities.size(); ++r)
        if (sol.intensities[r] < 0.0)
            fail("solar.intensities[" + std::to_string(r) + "]", "must be nonnegative");
    for (std::size_t r = 0; r < sol.cloud_mean_diameters.size(); ++r)
        if (!(sol.cloud_mean_diameters[r] > 0.0))
            fail("solar.cloud_mean_diameters[" + std::to_string(r) + "]", "must be positive");
    if (!(sol.wind_speed > 0.0)) fail("solar.wind_speed", "must be positive");
    if (!(sol.panel_area > 0.0)) fail("solar.panel_area", "must be positive");
    if (!(sol.conversion_efficiency > 0.0 && sol.conversion_efficiency <= 1.0))
        fail("solar.conversion_efficiency", "must be in (0, 1]");

    const auto& bat = raw.battery;
    if (!(bat.unit > 0.0)) fail("battery.unit", "must be positive");
    if (!(bat.capacity >= bat.unit)) fail("battery.capacity", "must be at least one battery.unit");

    // Small slack absorbs decimal representation error, e.g. floor(1/0.05).
    int units = 0;
    if (bat.unit > 0.0) units = static_cast<int>(std::floor(bat.capacity / bat.unit + 1e-9));

    const auto& classes = raw.traffic.classes;
    if (classes.empty()) fail("traffic.classes", "at least one packet class required");
    for (std::size_t n = 0; n < classes.size(); ++n) {
        const std::string tag = "traffic.classes[" + std::to_string(n) + "]";
        if (!(classes[n].arrival_rate > 0.0)) fail(tag + ".arrival_rate", "must be positive");
        if (classes[n].sbs_cost_units < 1) fail(tag + ".sbs_cost_units", "must be a positive integer");
        if (classes[n].mbs_cost_units < 1) fail(tag + ".mbs_cost_units", "must be a positive integer");
        if (classes[n].sbs_cost_units > units && units > 0)
            fail(tag + ".sbs_cost_units", "exceeds battery capacity in units (" + std::to_string(units) +
                                              "); the SBS could never serve this class");
        if (classes[n].mbs_cost_units <= classes[n].sbs_cost_units)
            warn(tag, "mbs_cost_units <= sbs_cost_units; typically grid transmission costs more units");
    }

    const auto& eco = raw.economics;
    if (eco.grid_price < 0.0) fail("economics.grid_price", "must be nonnegative");
    if (eco.solar_price < 0.0) fail("economics.solar_price", "must be nonnegative");
    if (eco.solar_price >= eco.grid_price && eco.grid_price > 0.0)
        warn("economics.solar_price", "expected below grid_price");
    if (!(eco.discount_rate > 0.0))
        warn("economics.discount_rate", "must be positive for the discounted criterion");

    if (!hard.empty()) throw ValidationError(std::move(hard));

    ValidatedParams out;
    out.raw_ = raw;
    out.battery_units_ = units;
    out.warnings_ = std::move(soft);
    for (std::size_t r = 0; r < sol.intensities.size(); ++r) {
        out.beta_.push_back(sol.wind_speed / sol.cloud_mean_diameters[r]);
        const double p = sol.conversion_efficiency * sol.intensities[r] * sol.panel_area;
        out.power_.push_back(p);
        out.unit_time_.push_back(p > 0.0 ? bat.unit / p : std::numeric_limits<double>::infinity());
    }
    for (const auto& cls : classes) out.total_arrival_rate_ += cls.arrival_rate;
    double beta_max = 0.0;
    for (double b : out.beta_) beta_max = std::max(beta_max, b);
    out.uniformization_rate_ = out.total_arrival_rate_ + beta_max;
    if (!std::isfinite(out.uniformization_rate_) || !(out.uniformization_rate_ > 0.0))
        throw ValidationError({{"traffic", "uniformization rate must be finite and positive", true}});
    return out;
}

}  // namespace solsched
