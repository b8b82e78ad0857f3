#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <span>

#include "fixtures.hpp"
#include "solsched/checks.hpp"
#include "solsched/solvers.hpp"

using namespace solsched;

namespace {

struct Setup {
    ValidatedParams params;
    StateSpace space;
    UniformizedKernel uniformized;
    DiscountedKernel discounted;
};

Setup table2_setup() {
    ValidatedParams params = ValidatedParams::validate(test::table2_params());
    StateSpace space = StateSpace::of(params);
    EmbeddedKernel embedded = build_embedded_kernel(params, space);
    UniformizedKernel uniformized = uniformize(embedded, params);
    DiscountedKernel discounted = build_discounted_kernel(params, space);
    return {std::move(params), space, std::move(uniformized), std::move(discounted)};
}

/// First battery level served from the SBS in group (r, class n); -1 = never.
int sbs_threshold(const Policy& policy, const StateSpace& space, int r, int n) {
    for (int m = 0; m <= space.battery_units(); ++m)
        if (policy.actions[space.index_of({r, m, Event::arrival(n)})] == Action::ServeSbs)
            return m;
    return -1;
}

}  // namespace

TEST_CASE("greedy policy thresholds equal the admissibility boundary") {
    const Setup s = table2_setup();
    const Policy greedy = greedy_policy(s.params, s.space);
    CHECK(greedy.actions[s.space.index_of({0, 3, Event::arrival(1)})] == Action::ServeSbs);
    CHECK(greedy.actions[s.space.index_of({0, 2, Event::arrival(1)})] == Action::ServeMbs);
    CHECK(greedy.actions[s.space.index_of({1, 6, Event::arrival(2)})] == Action::ServeSbs);
    CHECK(greedy.actions[s.space.index_of({1, 5, Event::arrival(2)})] == Action::ServeMbs);
    CHECK(sbs_threshold(greedy, s.space, 0, 1) == 3);
    CHECK(sbs_threshold(greedy, s.space, 1, 1) == 3);
    CHECK(sbs_threshold(greedy, s.space, 0, 2) == 6);
    CHECK(sbs_threshold(greedy, s.space, 1, 2) == 6);
}

TEST_CASE("single-unit sbs cost serves from one unit up") {
    SystemParams raw = test::table2_params();
    raw.traffic.classes = {{10.0, 8, 1}};
    const ValidatedParams p = ValidatedParams::validate(raw);
    const StateSpace space = StateSpace::of(p);
    const Policy greedy = greedy_policy(p, space);
    for (int m = 1; m <= space.battery_units(); ++m)
        CHECK(greedy.actions[space.index_of({0, m, Event::arrival(1)})] == Action::ServeSbs);
}

TEST_CASE("rvi on table2") {
    const Setup s = table2_setup();
    SolverConfig config;
    const AverageSolveResult result = solve_average_rvi(s.uniformized, config);

    // Frozen regression anchor, certified against an exact policy-iteration
    // solve of the same chain.
    CHECK(result.gain == doctest::Approx(135.6222818).epsilon(2e-7));
    CHECK(result.final_span < config.tolerance);
    CHECK(result.gain_lower <= result.gain + 1e-9);
    CHECK(result.gain_upper >= result.gain - 1e-9);
    CHECK(result.gain_upper - result.gain_lower <= 15.04 * config.tolerance * 1.01);

    // Optimal thresholds for this kernel: class 1 whenever admissible;
    // class 2 never under weak sun, whenever admissible under strong sun.
    CHECK(sbs_threshold(result.policy, s.space, 0, 1) == 3);
    CHECK(sbs_threshold(result.policy, s.space, 1, 1) == 3);
    CHECK(sbs_threshold(result.policy, s.space, 0, 2) == -1);
    CHECK(sbs_threshold(result.policy, s.space, 1, 2) == 6);

    CHECK(checks::policy_admissible(result.policy, s.space, s.params).passed);
    CHECK(checks::threshold_structure(result.policy, s.space).passed);
    CHECK(checks::bellman_residual_average(result, s.uniformized, config).passed);
}

TEST_CASE("vi on table2") {
    const Setup s = table2_setup();
    SolverConfig config;
    const DiscountedSolveResult result = solve_discounted_vi(s.discounted, config);

    CHECK(result.final_span < config.tolerance);
    for (double v : result.values) CHECK(v >= 0.0);
    // crude upper bound c_max * (gamma_max + alpha) / alpha
    const double bound = 20.0 * (15.04 + 0.05) / 0.05;
    for (double v : result.values) CHECK(v <= bound);

    CHECK(sbs_threshold(result.policy, s.space, 0, 1) == 3);
    CHECK(sbs_threshold(result.policy, s.space, 1, 1) == 3);
    CHECK(sbs_threshold(result.policy, s.space, 0, 2) == -1);
    CHECK(sbs_threshold(result.policy, s.space, 1, 2) == 6);

    CHECK(checks::bellman_residual_discounted(result, s.discounted, config).passed);
    CHECK(checks::threshold_structure(result.policy, s.space).passed);
}

TEST_CASE("vi contraction: spans decay at the row-mass modulus") {
    const Setup s = table2_setup();
    SolverConfig config;
    config.record_spans = true;
    const DiscountedSolveResult result = solve_discounted_vi(s.discounted, config);
    REQUIRE(result.spans.size() > 100);
    const double q = 15.04 / 15.09;
    // Geometric decay holds in the long run; compare across windows rather
    // than step to step (single steps of a min-operator can wobble).
    const std::size_t window = 50;
    for (std::size_t i = 20; i + window < result.spans.size() - 5; i += window) {
        const double ratio = result.spans[i + window] / result.spans[i];
        CHECK(ratio <= std::pow(q, double(window)) * 1.5);
    }
}

TEST_CASE("zero prices give zero values and flagged ties") {
    SystemParams raw = test::table2_params();
    raw.economics.grid_price = 0.0;
    raw.economics.solar_price = 0.0;
    const ValidatedParams p = ValidatedParams::validate(raw);
    const StateSpace space = StateSpace::of(p);
    const DiscountedKernel discounted = build_discounted_kernel(p, space);
    SolverConfig config;
    const DiscountedSolveResult result = solve_discounted_vi(discounted, config);
    CHECK(result.iterations <= 2);
    for (double v : result.values) CHECK(v == 0.0);
    // every two-action state is an exact tie resolved to the MBS
    int two_action_states = 0;
    for (int i = 0; i < space.size(); ++i) {
        const DecisionState st = space.state_at(i);
        if (admissible_actions(st, p).size() == 2) {
            ++two_action_states;
            CHECK(result.policy.actions[i] == Action::ServeMbs);
        }
    }
    CHECK(int(result.ties.size()) == two_action_states);
}

TEST_CASE("forced all-MBS evaluation reproduces the renewal-reward rate") {
    const Setup s = table2_setup();
    SolverConfig config;
    const Policy mbs = all_mbs_policy(s.params, s.space);
    const AverageEvalResult eval = evaluate_policy_average(mbs, s.uniformized, config);
    // rate = omega_m * (lambda_1 zeta_1 + lambda_2 zeta_2) = 2 * 130
    CHECK(eval.gain == doctest::Approx(260.0).epsilon(1e-9));
}

TEST_CASE("optimality dominance") {
    const Setup s = table2_setup();
    SolverConfig config;
    const AverageSolveResult opt = solve_average_rvi(s.uniformized, config);
    const double g_greedy =
        evaluate_policy_average(greedy_policy(s.params, s.space), s.uniformized, config).gain;
    const double g_mbs =
        evaluate_policy_average(all_mbs_policy(s.params, s.space), s.uniformized, config).gain;
    const double g_self = evaluate_policy_average(opt.policy, s.uniformized, config).gain;
    CHECK(opt.gain <= g_greedy + 1e-8);
    CHECK(opt.gain <= g_mbs + 1e-8);
    CHECK(g_self == doctest::Approx(opt.gain).epsilon(1e-8));
    CHECK(g_greedy == doctest::Approx(136.9497).epsilon(1e-4));
}

TEST_CASE("singleton action sets force the policy") {
    // xi = M leaves exactly one two-action state per radiation state; every
    // other state has a singleton action set that the argmin must echo.
    SystemParams raw = test::table2_params();
    raw.traffic.classes = {{10.0, 8, 20}};
    const ValidatedParams p = ValidatedParams::validate(raw);
    const StateSpace space = StateSpace::of(p);
    const UniformizedKernel uniformized = uniformize(build_embedded_kernel(p, space), p);
    SolverConfig config;
    const AverageSolveResult result = solve_average_rvi(uniformized, config);
    const AverageEvalResult eval = evaluate_policy_average(result.policy, uniformized, config);
    CHECK(eval.gain == doctest::Approx(result.gain).epsilon(1e-8));
    int singletons = 0;
    for (int i = 0; i < space.size(); ++i) {
        const ActionSet set = admissible_actions(space.state_at(i), p);
        if (set.size() == 1) {
            ++singletons;
            CHECK(result.policy.actions[i] == set[0]);
        }
    }
    CHECK(singletons == space.size() - 2);
}

TEST_CASE("price scaling leaves the argmin unchanged") {
    const Setup s = table2_setup();
    SolverConfig config;
    const AverageSolveResult base = solve_average_rvi(s.uniformized, config);
    const DiscountedSolveResult base_vi = solve_discounted_vi(s.discounted, config);

    SystemParams raw = test::table2_params();
    raw.economics.grid_price *= 3.0;
    raw.economics.solar_price *= 3.0;
    const ValidatedParams p = ValidatedParams::validate(raw);
    const StateSpace space = StateSpace::of(p);
    const EmbeddedKernel embedded = build_embedded_kernel(p, space);
    const AverageSolveResult scaled = solve_average_rvi(uniformize(embedded, p), config);
    const DiscountedSolveResult scaled_vi =
        solve_discounted_vi(build_discounted_kernel(p, space), config);
    CHECK(scaled.policy == base.policy);
    CHECK(scaled_vi.policy == base_vi.policy);
    CHECK(greedy_policy(p, space) == greedy_policy(s.params, s.space));
}

TEST_CASE("solver determinism") {
    const Setup s = table2_setup();
    SolverConfig config;
    const AverageSolveResult a = solve_average_rvi(s.uniformized, config);
    const AverageSolveResult b = solve_average_rvi(s.uniformized, config);
    CHECK(a.policy == b.policy);
    CHECK(a.iterations == b.iterations);
    CHECK(a.gain == b.gain);
    const DiscountedSolveResult c = solve_discounted_vi(s.discounted, config);
    const DiscountedSolveResult d = solve_discounted_vi(s.discounted, config);
    CHECK(c.policy == d.policy);
    CHECK(c.iterations == d.iterations);
    CHECK(c.values == d.values);
}

TEST_CASE("iteration cap raises a solve error carrying the span") {
    const Setup s = table2_setup();
    SolverConfig config;
    config.max_iterations = 3;
    try {
        solve_average_rvi(s.uniformized, config);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        CHECK(e.iterations == 3);
        CHECK(e.last_span > 0.0);
    }
}

TEST_CASE("policy table layout") {
    const Setup s = table2_setup();
    SolverConfig config;
    std::vector<Policy> policies{solve_average_rvi(s.uniformized, config).policy,
                                 greedy_policy(s.params, s.space)};
    const std::string table = policy_table(policies, s.space);
    // 21 battery rows + legend + two header lines
    CHECK(std::count(table.begin(), table.end(), '\n') == 24);
    CHECK(table.find("<[0,m],e1>") != std::string::npos);
    CHECK(table.find("<[1,m],e2>") != std::string::npos);
    CHECK(table.find("greedy") != std::string::npos);

    SUBCASE("single policy renders one sub-column") {
        const std::string single = policy_table(std::span(policies.data(), 1), s.space);
        CHECK(single.find("[1] rvi-average") != std::string::npos);
        CHECK(single.find("[2]") == std::string::npos);
    }
    SUBCASE("empty policy list is an error") {
        CHECK_THROWS_AS(policy_table(std::span<const Policy>(), s.space), std::invalid_argument);
    }
    SUBCASE("mismatched state space is an error") {
        const StateSpace other(1, 0, 1);
        CHECK_THROWS_AS(policy_table(policies, other), std::invalid_argument);
    }
}
