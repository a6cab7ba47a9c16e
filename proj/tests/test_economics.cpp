#include <cmath>

#include "doctest.h"
#include "economics.hpp"

using namespace fishmpc;

namespace {
const EconomicCostParams ECON;
const FarmConfig FARM;  // 1000 fish, 20 g

// Hand-built two-day run: heated one day, aerated both, fed a known mass.
ClosedLoopResult tiny_run() {
    ClosedLoopResult run;
    run.states = {{0.0, 20.0}, {1.0, 22.0}, {2.0, 24.5}};
    run.applied = {{0.5, 29.0, 8.0}, {0.4, 24.0, 4.0}};
    run.commanded = run.applied;
    run.per_step_feed = {2.0, 2.2};  // g/day
    run.solver_stats.resize(2);
    return run;
}
}  // namespace

TEST_CASE("feed conversion ratio is feed mass over body gain") {
    CHECK(compute_fcr(768.29, 502.15 + 20.0, 20.0) == doctest::Approx(1.53).epsilon(1e-3));
    CHECK(compute_fcr(2.0, 3.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(compute_fcr(2.0, 1.0, 1.0), Error);   // lost weight
    CHECK_THROWS_AS(compute_fcr(2.0, 1.0, 1.0), Error);
}

TEST_CASE("revenue prices the whole population at the gate") {
    CHECK(compute_revenue(1000, 0.38618, 1.2) == doctest::Approx(463.416).epsilon(1e-12));
    CHECK(compute_revenue(1000, 0.42761, 1.2) == doctest::Approx(513.132).epsilon(1e-12));
    CHECK(compute_revenue(1, 0.001, 1.2) == doctest::Approx(0.0012).epsilon(1e-12));
}

TEST_CASE("ledger prices feed per fish and utilities per tank") {
    const auto run = tiny_run();
    const CostLedger led = compute_cost_ledger(run, FARM, ECON);
    // 4.2 g/fish over the run, 1000 fish at 0.4 USD/kg
    CHECK(led.feed_cost == doctest::Approx(0.4 * (4.2 / 1000.0) * 1000.0).epsilon(1e-12));
    // one day holds 29 degC against an ambient of 24
    CHECK(led.heating_cost ==
          doctest::Approx(0.14 * 4.2 * 454.0 * 5.0 / 3600.0).epsilon(1e-12));
    // aeration: one day full duty + one day half duty
    const double day_full = 24.0 * 0.14 * 0.102;
    CHECK(led.oxygenation_cost == doctest::Approx(day_full * 1.5).epsilon(1e-12));
    CHECK(led.revenue == doctest::Approx(1000.0 * 0.0245 * 1.2).epsilon(1e-12));
    CHECK(led.total_costs ==
          doctest::Approx(led.feed_cost + led.heating_cost + led.oxygenation_cost).epsilon(1e-15));
    CHECK(led.profit == doctest::Approx(led.revenue - led.total_costs).epsilon(1e-15));
}

TEST_CASE("raising the feed price flows straight through to lower profit") {
    const auto run = tiny_run();
    EconomicCostParams pricier = ECON;
    pricier.P_f *= 2.0;
    const CostLedger base = compute_cost_ledger(run, FARM, ECON);
    const CostLedger worse = compute_cost_ledger(run, FARM, pricier);
    CHECK(worse.feed_cost == doctest::Approx(2.0 * base.feed_cost).epsilon(1e-12));
    CHECK(worse.profit < base.profit);
}

TEST_CASE("an empty run yields an all-zero ledger priced at the initial weight") {
    ClosedLoopResult run;
    run.states = {{0.0, 20.0}};
    const CostLedger led = compute_cost_ledger(run, FARM, ECON);
    CHECK(led.feed_cost == 0.0);
    CHECK(led.heating_cost == 0.0);
    CHECK(led.oxygenation_cost == 0.0);
    CHECK(led.revenue == doctest::Approx(1000.0 * 0.02 * 1.2).epsilon(1e-12));
    CHECK(led.profit == led.revenue);
}

TEST_CASE("profit and percentage reproduce the published comparison rows") {
    const auto [p1, pct1] = profit_and_percentage(463.416, 322.046);
    CHECK(p1 == doctest::Approx(141.37).epsilon(1e-4));
    CHECK(pct1 == doctest::Approx(43.89).epsilon(1e-3));
    const auto [p2, pct2] = profit_and_percentage(513.132, 368.256);
    CHECK(p2 == doctest::Approx(144.876).epsilon(1e-12));
    CHECK(pct2 == doctest::Approx(39.34).epsilon(1e-3));
    const auto [p3, pct3] = profit_and_percentage(100.0, 100.0);
    CHECK(p3 == 0.0);
    CHECK(pct3 == 0.0);
    CHECK_THROWS_AS(profit_and_percentage(100.0, 0.0), Error);
}

TEST_CASE("tracking error is measured against the interpolated reference") {
    ReferenceTrajectory ref;
    ref.t = {0.0, 1.0, 2.0};
    ref.w_d = {100.0, 100.0, 100.0};
    SUBCASE("zero on the reference") {
        const std::vector<FishState> states = {{0.0, 100.0}, {1.0, 100.0}, {2.0, 100.0}};
        CHECK(tracking_mse(states, ref) == 0.0);
        CHECK(tracking_mse(states, ref, MseMode::absolute) == 0.0);
    }
    SUBCASE("a constant ten percent miss scores one in relative mode") {
        const std::vector<FishState> states = {{0.0, 110.0}, {1.0, 110.0}, {2.0, 110.0}};
        CHECK(tracking_mse(states, ref) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("absolute mode reports squared grams") {
        const std::vector<FishState> states = {{0.0, 102.0}, {1.0, 102.0}, {2.0, 102.0}};
        CHECK(tracking_mse(states, ref, MseMode::absolute) == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("run summary assembles the metrics and flags undefined ratios") {
    ReferenceTrajectory ref;
    ref.t = {0.0, 1.0, 2.0};
    ref.w_d = {20.0, 22.0, 24.5};
    const auto run = tiny_run();
    const PerformanceReport rep = summarize_run(run, ref, FARM, ECON);
    CHECK(rep.tracking_mse == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(rep.fcr.has_value());
    CHECK(*rep.fcr == doctest::Approx(4.2 / 4.5).epsilon(1e-12));
    CHECK(rep.final_weight == doctest::Approx(24.5));
    CHECK(rep.total_feed == doctest::Approx(4.2));
    // a shrinking run has no defined conversion ratio
    ClosedLoopResult shrink = tiny_run();
    shrink.states = {{0.0, 20.0}, {1.0, 19.0}, {2.0, 18.0}};
    ReferenceTrajectory ref2 = ref;
    const PerformanceReport rep2 = summarize_run(shrink, ref2, FARM, ECON);
    CHECK(!rep2.fcr.has_value());
}
