#include <doctest.h>

#include <cmath>

#include "cqsedram/cell.hpp"

using namespace cqsedram;

namespace {

// A device whose port leakage is a known constant at 300 K.
DeviceParams flat_device(double i_port) {
    DeviceParams dev;
    dev.i_sub0 = 1e-30;
    dev.i_floor = i_port;
    return dev;
}

}  // namespace

TEST_CASE("analytic retention oracle") {
    CHECK(retention_time_analytic(1e-15, 0.55, 1e-12) == doctest::Approx(5.5e-4));
    CHECK_THROWS_AS(retention_time_analytic(0.0, 0.5, 1e-12), DomainError);
    CHECK_THROWS_AS(retention_time_analytic(1e-15, -0.1, 1e-12), DomainError);
    CHECK_THROWS_AS(retention_time_analytic(1e-15, 0.5, 0.0), DomainError);
}

TEST_CASE("ODE retention matches the constant-current formula") {
    const double i = 3e-15;
    BitCellConfig cell;
    const DeviceParams dev = flat_device(i);
    const ThermalOperatingPoint op{300.0, 1.1};
    const double expected = retention_time_analytic(cell.c_sn, 0.55, i);
    CHECK(retention_time(cell, dev, op) == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("leak_scale divides the effective current") {
    const double i = 3e-15;
    BitCellConfig cell;
    const DeviceParams dev = flat_device(i);
    const ThermalOperatingPoint op{300.0, 1.1};
    const double t1 = retention_time(cell, dev, op, 1.0);
    const double t2 = retention_time(cell, dev, op, 0.5);
    CHECK(t2 == doctest::Approx(2.0 * t1).epsilon(1e-3));
}

TEST_CASE("WBL bias sweep: non-increasing, endpoint ratio = disturb gain") {
    BitCellConfig cell;
    cell.disturb_gain = 1.48;
    const DeviceParams dev = flat_device(1e-15);
    const ThermalOperatingPoint op{300.0, 1.1};
    const auto sweep =
        wbl_bias_sweep(cell, dev, op, {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.1});
    for (size_t i = 1; i < sweep.size(); ++i) {
        CHECK(sweep[i].second <= sweep[i - 1].second * (1.0 + 1e-9));
    }
    CHECK(sweep.front().second / sweep.back().second ==
          doctest::Approx(1.48).epsilon(1e-3));
    CHECK_THROWS_AS(wbl_bias_sweep(cell, dev, op, {1.2}), DomainError);
}

TEST_CASE("write access ratios at 10 K match the calibrated defaults") {
    DeviceParams dev;
    AccessModelParams am;
    const ThermalOperatingPoint op10{10.0, 1.1};
    BitCellConfig tg, nw, pw;
    nw.topology = CellTopology::N_WRITE;
    pw.topology = CellTopology::P_WRITE;
    const AccessMetrics mtg = write_access(tg, dev, op10, am);
    const AccessMetrics mn = write_access(nw, dev, op10, am);
    const AccessMetrics mp = write_access(pw, dev, op10, am);
    CHECK(mn.energy / mtg.energy == doctest::Approx(1.84).epsilon(2e-3));
    CHECK(mp.energy / mtg.energy == doctest::Approx(1.61).epsilon(2e-3));
    CHECK(mn.delay / mtg.delay == doctest::Approx(2.10).epsilon(2e-3));
    CHECK(mp.delay / mtg.delay == doctest::Approx(1.76).epsilon(2e-3));

    BitCellConfig ro;
    ro.topology = CellTopology::READ_2TN;
    CHECK_THROWS_AS(write_access(ro, dev, op10, am), UsageError);
}

TEST_CASE("read access: absolute delays and topology ratios") {
    DeviceParams dev;
    AccessModelParams am;
    BitCellConfig tg;
    const ThermalOperatingPoint op300{300.0, 1.1};
    const ThermalOperatingPoint op42{4.2, 1.1};
    CHECK(read_access(tg, dev, op300, 1, am).delay ==
          doctest::Approx(1100e-12).epsilon(1e-6));
    CHECK(read_access(tg, dev, op42, 1, am).delay ==
          doctest::Approx(820e-12).epsilon(2e-3));
    // Read '0' pays only overhead energy.
    CHECK(read_access(tg, dev, op300, 0, am).energy <
          read_access(tg, dev, op300, 1, am).energy);

    BitCellConfig one_t;
    one_t.topology = CellTopology::READ_1T;
    CHECK(read_access(one_t, dev, op300, 1, am).energy /
              read_access(tg, dev, op300, 1, am).energy ==
          doctest::Approx(1.98));
    CHECK(read_access(one_t, dev, op300, 1, am).delay /
              read_access(tg, dev, op300, 1, am).delay ==
          doctest::Approx(1.41));

    BitCellConfig wo;
    wo.topology = CellTopology::N_WRITE;
    CHECK_THROWS_AS(read_access(wo, dev, op300, 1, am), UsageError);
}

TEST_CASE("readout EDP: inverter degrades as the SN level drops") {
    const ThermalOperatingPoint op{4.2, 1.1};
    double prev_ratio = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double v = k == 10 ? 0.6 : 1.1 - 0.05 * k;
        const double sa = readout_edp(ReadoutStructure::SENSE_AMP, v, op);
        const double inv = readout_edp(ReadoutStructure::INVERTER, v, op);
        const double ratio = inv / sa;
        CHECK(ratio >= 3.0);
        CHECK(ratio >= prev_ratio);
        prev_ratio = ratio;
    }
    const double sa = readout_edp(ReadoutStructure::SENSE_AMP, 0.6, op);
    const double inv = readout_edp(ReadoutStructure::INVERTER, 0.6, op);
    CHECK(inv / sa == doctest::Approx(7.40));
    CHECK_THROWS_AS(readout_edp(ReadoutStructure::INVERTER, 0.5, op), DomainError);
}

TEST_CASE("cell validation") {
    BitCellConfig cell;
    cell.c_sn = 0.0;
    CHECK_THROWS_AS(cell.validate(1.1), DomainError);
    cell = BitCellConfig{};
    cell.wbl_bias = 1.5;
    CHECK_THROWS_AS(cell.validate(1.1), DomainError);
    cell = BitCellConfig{};
    cell.v_fail = 1.2;
    CHECK_THROWS_AS(cell.validate(1.1), DomainError);
}
