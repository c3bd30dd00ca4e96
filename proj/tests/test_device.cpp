#include <doctest.h>

#include "cqsedram/device.hpp"

using namespace cqsedram;

TEST_CASE("threshold voltage pins both anchors and is non-increasing in T") {
    DeviceParams p;
    CHECK(threshold_voltage(p, 300.0) == doctest::Approx(p.vth_300));
    CHECK(threshold_voltage(p, 4.2) == doctest::Approx(p.vth_300 + p.dvth_cryo));
    CHECK(p.dvth_cryo >= 0.11);

    double prev = threshold_voltage(p, 1.0);
    for (double t = 5.0; t <= 400.0; t += 5.0) {
        const double v = threshold_voltage(p, t);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    CHECK_THROWS_AS(threshold_voltage(p, 0.5), DomainError);
    CHECK_THROWS_AS(threshold_voltage(p, 500.0), DomainError);
}

TEST_CASE("subthreshold swing: thermionic at 300 K, saturated at 4.2 K") {
    DeviceParams p;
    // n * ln(10) * kT/e at 300 K with n = 1.3.
    CHECK(subthreshold_swing(p, 300.0) == doctest::Approx(0.0773840).epsilon(1e-4));
    CHECK(subthreshold_swing(p, 4.2) == doctest::Approx(p.ss_floor));
    // Non-decreasing in temperature.
    double prev = subthreshold_swing(p, 1.0);
    for (double t = 2.0; t <= 400.0; t += 2.0) {
        const double s = subthreshold_swing(p, t);
        CHECK(s >= prev - 1e-15);
        prev = s;
    }
}

TEST_CASE("off leakage is positive and non-decreasing in temperature") {
    DeviceParams p;
    p.i_floor = 1e-18;
    double prev = 0.0;
    for (double t = 4.2; t <= 400.0; t += 10.0) {
        const double i = off_leakage(p, 0.0, 1.1, t);
        CHECK(i > 0.0);
        CHECK(i >= prev);
        prev = i;
    }
    CHECK_THROWS_AS(off_leakage(p, 0.0, -0.1, 300.0), DomainError);
}

TEST_CASE("junction term follows an activation law and the bias factor") {
    DeviceParams p;
    p.i_sub0 = 1e-30;  // isolate the junction term
    p.junction_i0 = 1e-6;
    const double i300 = off_leakage(p, 0.0, 1.1, 300.0);
    const double i200 = off_leakage(p, 0.0, 1.1, 200.0);
    CHECK(i300 > i200);
    // Bias factor is bounded and normalized at vdd_nominal.
    CHECK(drain_bias_factor(p, 1.1) == doctest::Approx(1.0));
    CHECK(drain_bias_factor(p, 0.55) == doctest::Approx(0.5));
    CHECK(drain_bias_factor(p, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("leak_vdd_scale is 1 at the nominal supply") {
    DeviceParams p;
    p.leak_vdd_shape_cryo = {0.5, 8.0, 9.0};
    p.leak_vdd_shape_room = {-1.6, 0.0, 0.0};
    CHECK(leak_vdd_scale(p, 4.2, 1.1) == doctest::Approx(1.0));
    CHECK(leak_vdd_scale(p, 300.0, 1.1) == doctest::Approx(1.0));
    // Interpolated shape lies between the anchor shapes.
    const double s42 = leak_vdd_scale(p, 4.2, 0.8);
    const double s300 = leak_vdd_scale(p, 300.0, 0.8);
    const double s150 = leak_vdd_scale(p, 150.0, 0.8);
    CHECK(s150 >= std::min(s42, s300));
    CHECK(s150 <= std::max(s42, s300));
}

TEST_CASE("device parameter validation") {
    DeviceParams p;
    p.i_sub0 = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = DeviceParams{};
    p.i_floor = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    ThermalOperatingPoint op{500.0, 1.1};
    CHECK_THROWS_AS(op.validate(), DomainError);
    op = {300.0, 0.1};
    CHECK_THROWS_AS(op.validate(), DomainError);
}
