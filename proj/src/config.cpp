#include "solsched/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solsched {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) fail("unknown key '" + where + key + "'");
    }
}

double require_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail("missing required key '" + where + key + "'");
    if (!obj[key].is_number()) fail("key '" + where + key + "' must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail("missing required key '" + where + key + "'");
    if (!obj[key].is_number_integer()) fail("key '" + where + key + "' must be an integer");
    return obj[key].get<int>();
}

const json& require_object(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail("missing required section '" + where + key + "'");
    if (!obj[key].is_object()) fail("section '" + where + key + "' must be an object");
    return obj[key];
}

std::vector<double> require_number_array(const json& obj, const std::string& where,
                                         const char* key) {
    if (!obj.contains(key)) fail("missing required key '" + where + key + "'");
    if (!obj[key].is_array()) fail("key '" + where + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) fail("key '" + where + key + "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ConfigBundle parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        fail("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
             ": " + e.what());
    }
    if (!doc.is_object()) fail("configuration root must be an object");
    reject_unknown(doc, "", {"solar", "battery", "traffic", "economics", "solver", "simulation"});

    ConfigBundle bundle;

    const json& solar = require_object(doc, "", "solar");
    reject_unknown(solar, "solar.", {"intensities", "cloud_mean_diameters", "wind_speed",
                                     "panel_area", "conversion_efficiency"});
    bundle.system.solar.intensities = require_number_array(solar, "solar.", "intensities");
    bundle.system.solar.cloud_mean_diameters =
        require_number_array(solar, "solar.", "cloud_mean_diameters");
    bundle.system.solar.wind_speed = require_number(solar, "solar.", "wind_speed");
    bundle.system.solar.panel_area = require_number(solar, "solar.", "panel_area");
    bundle.system.solar.conversion_efficiency =
        require_number(solar, "solar.", "conversion_efficiency");

    const json& battery = require_object(doc, "", "battery");
    reject_unknown(battery, "battery.", {"capacity", "unit"});
    bundle.system.battery.capacity = require_number(battery, "battery.", "capacity");
    bundle.system.battery.unit = require_number(battery, "battery.", "unit");

    const json& traffic = require_object(doc, "", "traffic");
    reject_unknown(traffic, "traffic.", {"classes"});
    if (!traffic.contains("classes") || !traffic["classes"].is_array())
        fail("missing required array 'traffic.classes'");
    int idx = 0;
    for (const auto& cls : traffic["classes"]) {
        const std::string where = "traffic.classes[" + std::to_string(idx++) + "].";
        if (!cls.is_object()) fail("entry '" + where + "' must be an object");
        reject_unknown(cls, where, {"arrival_rate", "mbs_cost_units", "sbs_cost_units"});
        TrafficClass tc;
        tc.arrival_rate = require_number(cls, where, "arrival_rate");
        tc.mbs_cost_units = require_int(cls, where, "mbs_cost_units");
        tc.sbs_cost_units = require_int(cls, where, "sbs_cost_units");
        bundle.system.traffic.classes.push_back(tc);
    }

    const json& eco = require_object(doc, "", "economics");
    reject_unknown(eco, "economics.", {"grid_price", "solar_price", "discount_rate"});
    bundle.system.economics.grid_price = require_number(eco, "economics.", "grid_price");
    bundle.system.economics.solar_price = require_number(eco, "economics.", "solar_price");
    bundle.system.economics.discount_rate = require_number(eco, "economics.", "discount_rate");

    if (doc.contains("solver")) {
        const json& solver = doc["solver"];
        reject_unknown(solver, "solver.",
                       {"tolerance", "reference_state", "max_iterations", "tie_tolerance"});
        if (solver.contains("tolerance"))
            bundle.solver.tolerance = require_number(solver, "solver.", "tolerance");
        if (solver.contains("reference_state"))
            bundle.solver.reference_state = require_int(solver, "solver.", "reference_state");
        if (solver.contains("max_iterations"))
            bundle.solver.max_iterations = require_int(solver, "solver.", "max_iterations");
        if (solver.contains("tie_tolerance"))
            bundle.solver.tie_tolerance = require_number(solver, "solver.", "tie_tolerance");
    }

    if (doc.contains("simulation")) {
        const json& sim = doc["simulation"];
        reject_unknown(sim, "simulation.",
                       {"horizon", "runs", "seed", "warmup", "initial_solar_state",
                        "initial_energy", "battery_mode"});
        if (sim.contains("horizon"))
            bundle.sim.horizon = require_number(sim, "simulation.", "horizon");
        if (sim.contains("runs")) bundle.sim.runs = require_int(sim, "simulation.", "runs");
        if (sim.contains("seed")) {
            if (!sim["seed"].is_number_unsigned() && !sim["seed"].is_number_integer())
                fail("key 'simulation.seed' must be an integer");
            bundle.sim.master_seed = sim["seed"].get<std::uint64_t>();
        }
        if (sim.contains("warmup"))
            bundle.sim.warmup = require_number(sim, "simulation.", "warmup");
        if (sim.contains("initial_solar_state"))
            bundle.sim.initial_solar_state = require_int(sim, "simulation.", "initial_solar_state");
        if (sim.contains("initial_energy"))
            bundle.sim.initial_energy = require_number(sim, "simulation.", "initial_energy");
        if (sim.contains("battery_mode")) {
            const std::string mode = sim["battery_mode"].get<std::string>();
            if (mode == "quantized")
                bundle.sim.battery_mode = BatteryMode::Quantized;
            else if (mode == "continuous")
                bundle.sim.battery_mode = BatteryMode::Continuous;
            else
                fail("simulation.battery_mode must be 'quantized' or 'continuous'");
        }
    }
    return bundle;
}

ConfigBundle load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        fail(path + ": " + e.what());
    }
}

std::string dump_config(const ConfigBundle& bundle) {
    json doc;
    doc["solar"] = {{"intensities", bundle.system.solar.intensities},
                    {"cloud_mean_diameters", bundle.system.solar.cloud_mean_diameters},
                    {"wind_speed", bundle.system.solar.wind_speed},
                    {"panel_area", bundle.system.solar.panel_area},
                    {"conversion_efficiency", bundle.system.solar.conversion_efficiency}};
    doc["battery"] = {{"capacity", bundle.system.battery.capacity},
                      {"unit", bundle.system.battery.unit}};
    doc["traffic"]["classes"] = json::array();
    for (const auto& cls : bundle.system.traffic.classes)
        doc["traffic"]["classes"].push_back({{"arrival_rate", cls.arrival_rate},
                                             {"mbs_cost_units", cls.mbs_cost_units},
                                             {"sbs_cost_units", cls.sbs_cost_units}});
    doc["economics"] = {{"grid_price", bundle.system.economics.grid_price},
                        {"solar_price", bundle.system.economics.solar_price},
                        {"discount_rate", bundle.system.economics.discount_rate}};
    doc["solver"] = {{"tolerance", bundle.solver.tolerance},
                     {"reference_state", bundle.solver.reference_state},
                     {"max_iterations", bundle.solver.max_iterations},
                     {"tie_tolerance", bundle.solver.tie_tolerance}};
    doc["simulation"] = {
        {"horizon", bundle.sim.horizon},
        {"runs", bundle.sim.runs},
        {"seed", bundle.sim.master_seed},
        {"warmup", bundle.sim.warmup},
        {"initial_solar_state", bundle.sim.initial_solar_state},
        {"initial_energy", bundle.sim.initial_energy},
        {"battery_mode",
         bundle.sim.battery_mode == BatteryMode::Quantized ? "quantized" : "continuous"}};
    return doc.dump(2);
}

std::string set_config_value(const std::string& text, const std::string& dotted_path,
                             double value) {
    json doc = json::parse(text);
    json* node = &doc;
    std::istringstream path(dotted_path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    if (parts.empty()) fail("empty parameter path");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const std::string& key = parts[i];
        if (node->is_array()) {
            const std::size_t pos = std::stoul(key);
            if (pos >= node->size()) fail("parameter path index out of range: " + dotted_path);
            node = &(*node)[pos];
        } else if (node->is_object() && node->contains(key)) {
            node = &(*node)[key];
        } else {
            fail("parameter path not found: " + dotted_path);
        }
    }
    const std::string& leaf = parts.back();
    if (node->is_array()) {
        const std::size_t pos = std::stoul(leaf);
        if (pos >= node->size()) fail("parameter path index out of range: " + dotted_path);
        (*node)[pos] = value;
    } else if (node->is_object() && node->contains(leaf)) {
        if ((*node)[leaf].is_number_integer())
            (*node)[leaf] = static_cast<long>(value);
        else
            (*node)[leaf] = value;
    } else {
        fail("parameter path not found: " + dotted_path);
    }
    return doc.dump(2);
}

}  // namespace solsched
