#include <doctest.h>

#include "cqsedram/refresh.hpp"

using namespace cqsedram;

namespace {

RetentionMap make_map(std::vector<double> values) {
    RetentionMap map;
    map.rows = 1;
    map.cols = static_cast<int>(values.size());
    map.retention = std::move(values);
    return map;
}

}  // namespace

TEST_CASE("min refresh period is the guarded minimum") {
    const RetentionMap map = make_map({5.0, 2.0, 9.0, 4.0});
    CHECK(min_refresh_period(map) == doctest::Approx(2.0));
    CHECK(min_refresh_period(map, 0.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(min_refresh_period(map, 0.0), DomainError);
    CHECK_THROWS_AS(min_refresh_period(map, 1.5), DomainError);
}

TEST_CASE("error rate counts cells below the period and is monotone") {
    const RetentionMap map = make_map({1.0, 2.0, 3.0, 4.0});
    CHECK(error_rate(map, 0.5) == doctest::Approx(0.0));
    CHECK(error_rate(map, 1.5) == doctest::Approx(0.25));
    CHECK(error_rate(map, 3.5) == doctest::Approx(0.75));
    CHECK(error_rate(map, 10.0) == doctest::Approx(1.0));
    double prev = 0.0;
    for (double p = 0.1; p < 5.0; p += 0.1) {
        const double e = error_rate(map, p);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("analytic error rate is the normal CDF") {
    // Phi(-2) frozen from standard normal tables.
    CHECK(error_rate_analytic(100.0, 10.0, 80.0) ==
          doctest::Approx(0.022750131948179195).epsilon(1e-9));
    CHECK(error_rate_analytic(100.0, 10.0, 100.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(error_rate_analytic(1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("retention power divides the budget by the period") {
    EnergyBudget b{1e-12, 2e-12, 3e-12};
    CHECK(b.total() == doctest::Approx(6e-12));
    CHECK(retention_power(b, 2.0) == doctest::Approx(3e-12));
    CHECK_THROWS_AS(retention_power(b, 0.0), DomainError);
}

TEST_CASE("DRPS selects the order statistic of the error budget") {
    const RetentionMap map =
        make_map({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0});
    CHECK(drps_select(map, 0.0) == doctest::Approx(1.0));
    CHECK(drps_select(map, 0.2) == doctest::Approx(3.0));
    CHECK(drps_select(map, 0.5) == doctest::Approx(6.0));
    CHECK_THROWS_AS(drps_select(map, 1.0), DomainError);
    // The selected period never violates the budget.
    for (double e = 0.0; e < 0.95; e += 0.05) {
        CHECK(error_rate(map, drps_select(map, e)) <= e + 1e-12);
    }
}

TEST_CASE("dynamic power recovers the calibrated totals at nominal activity") {
    PowerModelParams pm;
    const ThermalOperatingPoint op42{4.2, 1.1};
    const ThermalOperatingPoint op300{300.0, 1.1};
    CHECK(dynamic_power(op42, nominal_activity(pm, 4.2), pm) ==
          doctest::Approx(pm.dyn_d_cryo + pm.dyn_s_cryo));
    CHECK(dynamic_power(op300, nominal_activity(pm, 300.0), pm) ==
          doctest::Approx(pm.dyn_d_room + pm.dyn_s_room));
    // Lower vdd only scales the dynamic part.
    const ThermalOperatingPoint low{4.2, 1.0};
    const double expected = pm.dyn_d_cryo * (1.0 / 1.1) * (1.0 / 1.1) + pm.dyn_s_cryo;
    CHECK(dynamic_power(low, nominal_activity(pm, 4.2), pm) == doctest::Approx(expected));
    CHECK_THROWS_AS(dynamic_power(op42, 0.0, pm), DomainError);
}

TEST_CASE("energy budget scales leakage with the refresh period") {
    ArrayConfig cfg;
    cfg.rows = 4;
    cfg.cols = 4;
    cfg.dev.i_sub0 = 1e-30;
    cfg.dev.i_floor = 1e-15;
    PowerModelParams pm;
    const ThermalOperatingPoint op{300.0, 1.1};
    const EnergyBudget b1 = energy_budget(cfg, op, 1.0, pm);
    const EnergyBudget b2 = energy_budget(cfg, op, 2.0, pm);
    CHECK(b2.e_leakage == doctest::Approx(2.0 * b1.e_leakage));
    CHECK(b2.e_read == doctest::Approx(b1.e_read));
    CHECK(b2.e_write == doctest::Approx(b1.e_write));
    CHECK(b1.e_read > 0.0);
    CHECK(b1.e_write > 0.0);
    CHECK_THROWS_AS(energy_budget(cfg, op, 0.0, pm), DomainError);
}
