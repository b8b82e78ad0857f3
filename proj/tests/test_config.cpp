#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "solsched/cli.hpp"
#include "solsched/config.hpp"
#include "solsched/simulator.hpp"

using namespace solsched;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("bundled table2 config matches the reference parameters") {
    const ConfigBundle bundle = load_config("configs/table2.json");
    const ValidatedParams p = ValidatedParams::validate(bundle.system);
    CHECK(p.intensity(0) == 50.0);
    CHECK(p.intensity(1) == 200.0);
    CHECK(p.raw().solar.cloud_mean_diameters == std::vector<double>{50.0, 100.0});
    CHECK(p.raw().solar.wind_speed == 2.0);
    CHECK(p.raw().solar.conversion_efficiency == 0.2);
    CHECK(p.raw().solar.panel_area == 0.1);
    CHECK(p.raw().battery.capacity == 1.0);
    CHECK(p.raw().battery.unit == 0.05);
    CHECK(p.arrival_rate(1) == 10.0);
    CHECK(p.arrival_rate(2) == 5.0);
    CHECK(p.mbs_cost_units(1) == 8);
    CHECK(p.mbs_cost_units(2) == 10);
    CHECK(p.sbs_cost_units(1) == 3);
    CHECK(p.sbs_cost_units(2) == 6);
    CHECK(p.grid_price() == 2.0);
    CHECK(p.solar_price() == 1.5);
    CHECK(p.discount_rate() == 0.05);
    CHECK(bundle.solver.tolerance == 1e-10);
    CHECK(bundle.sim.horizon == 3600.0);
    CHECK(bundle.sim.runs == 10);
    CHECK(bundle.sim.battery_mode == BatteryMode::Quantized);
}

TEST_CASE("unknown keys are rejected") {
    std::string text = slurp("configs/table2.json");
    text.insert(text.rfind('}'), ", \"extra_section\": {}");
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("unknown key 'extra_section'"), ConfigError);
}

TEST_CASE("unknown nested keys are rejected with their path") {
    const std::string text = R"({"solar": {"intensities": [1], "cloud_mean_diameters": [1],
        "wind_speed": 1, "panel_area": 1, "conversion_efficiency": 0.5, "typo": 3},
        "battery": {"capacity": 1, "unit": 1},
        "traffic": {"classes": [{"arrival_rate": 1, "mbs_cost_units": 2, "sbs_cost_units": 1}]},
        "economics": {"grid_price": 2, "solar_price": 1, "discount_rate": 0.05}})";
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("solar.typo"), ConfigError);
}

TEST_CASE("missing required keys are named") {
    const std::string text = R"({"solar": {"intensities": [1], "cloud_mean_diameters": [1],
        "wind_speed": 1, "panel_area": 1},
        "battery": {"capacity": 1, "unit": 1},
        "traffic": {"classes": [{"arrival_rate": 1, "mbs_cost_units": 2, "sbs_cost_units": 1}]},
        "economics": {"grid_price": 2, "solar_price": 1, "discount_rate": 0.05}})";
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("solar.conversion_efficiency"), ConfigError);
}

TEST_CASE("parse errors carry line information") {
    CHECK_THROWS_WITH_AS(parse_config("{\n  \"solar\": [,]\n}"), doctest::Contains("line 2"),
                         ConfigError);
}

TEST_CASE("soft validation warns but loads") {
    ConfigBundle bundle = load_config("configs/table2.json");
    bundle.system.traffic.classes[0].sbs_cost_units = 9;  // above mbs_cost_units = 8
    const ValidatedParams p = ValidatedParams::validate(bundle.system);
    CHECK(p.warnings().size() == 1);
}

TEST_CASE("config round-trips through dump_config") {
    const ConfigBundle bundle = load_config("configs/table2.json");
    const ConfigBundle again = parse_config(dump_config(bundle));
    CHECK(again.system.solar.intensities == bundle.system.solar.intensities);
    CHECK(again.sim.master_seed == bundle.sim.master_seed);
    CHECK(again.solver.tolerance == bundle.solver.tolerance);
}

TEST_CASE("set_config_value rewrites dotted paths") {
    const std::string text = slurp("configs/table2.json");
    const ConfigBundle bundle =
        parse_config(set_config_value(text, "traffic.classes.0.arrival_rate", 4.0));
    CHECK(bundle.system.traffic.classes[0].arrival_rate == 4.0);
    CHECK_THROWS_AS(set_config_value(text, "traffic.classes.5.arrival_rate", 4.0), ConfigError);
    CHECK_THROWS_AS(set_config_value(text, "nope.nope", 4.0), ConfigError);
}

TEST_CASE("policy files round-trip") {
    const ConfigBundle bundle = load_config("configs/table2.json");
    const ValidatedParams p = ValidatedParams::validate(bundle.system);
    const StateSpace space = StateSpace::of(p);
    const Policy greedy = greedy_policy(p, space);

    const auto dir = std::filesystem::temp_directory_path() / "solsched_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "policy.txt").string();
    cli::write_policy_file(path, greedy, space);
    const Policy loaded = cli::read_policy_file(path, space);
    CHECK(loaded.actions == greedy.actions);

    SimConfig sim = bundle.sim;
    sim.horizon = 300.0;
    sim.runs = 2;
    const SimulationResult a = simulate(greedy, p, space, sim);
    const SimulationResult b = simulate(loaded, p, space, sim);
    CHECK(a.mean_avg_cost == b.mean_avg_cost);

    SUBCASE("malformed files are rejected") {
        std::ofstream out(path, std::ios::app);
        out << "garbage line\n";
        out.close();
        CHECK_THROWS(cli::read_policy_file(path, space));
    }
}

TEST_CASE("csv floats render round-trippable") {
    CHECK(cli::format_double(0.1) == "0.10000000000000001");
    CHECK(cli::format_double(260.0) == "260");
    const double pi = 3.14159265358979323846;
    CHECK(std::stod(cli::format_double(pi)) == pi);
}
