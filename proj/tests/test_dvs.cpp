#include <doctest.h>

#include "cqsedram/dvs.hpp"

using namespace cqsedram;

namespace {

ArrayConfig sweep_config() {
    ArrayConfig cfg;
    cfg.rows = 4;
    cfg.cols = 8;
    cfg.dev.i_sub0 = 1e-30;
    cfg.dev.i_floor = 1e-15;
    cfg.retention_jitter_room = 0.05;
    return cfg;
}

SweepPoint pt(double vdd, double p_ret, double p_dyn) {
    SweepPoint p;
    p.vdd = vdd;
    p.p_retention = p_ret;
    p.p_dynamic = p_dyn;
    return p;
}

}  // namespace

TEST_CASE("optimal_vdd picks the argmin per objective, ties to lower vdd") {
    const std::vector<SweepPoint> pts = {pt(0.8, 3.0, 1.0), pt(0.9, 2.0, 2.0),
                                         pt(1.0, 2.0, 3.0), pt(1.1, 4.0, 0.5)};
    CHECK(optimal_vdd(pts, SweepObjective::MIN_RETENTION_POWER).vdd ==
          doctest::Approx(0.9));
    CHECK(optimal_vdd(pts, SweepObjective::MIN_DYNAMIC_POWER).vdd ==
          doctest::Approx(1.1));
    ObjectiveWeights w{1.0, 1.0};
    CHECK(optimal_vdd(pts, SweepObjective::MIN_TOTAL, w).vdd == doctest::Approx(0.8));
    CHECK_THROWS_AS(optimal_vdd({}, SweepObjective::MIN_RETENTION_POWER), UsageError);
}

TEST_CASE("vdd_sweep covers the grid and retention rises with vdd") {
    const ArrayConfig cfg = sweep_config();
    PowerModelParams pm;
    const SweepTable table = vdd_sweep(cfg, 300.0, {0.7, 0.9, 1.1}, pm);
    REQUIRE(table.points.size() == 3);
    CHECK(table.points[0].vdd == doctest::Approx(0.7));
    CHECK(table.points[0].mean_ret < table.points[1].mean_ret);
    CHECK(table.points[1].mean_ret < table.points[2].mean_ret);
    for (const auto& p : table.points) {
        CHECK(p.t_min > 0.0);
        CHECK(p.t_min <= p.mean_ret);
        CHECK(p.p_retention > 0.0);
        CHECK(p.p_dynamic > 0.0);
    }
}

TEST_CASE("one-point grid returns that point") {
    const ArrayConfig cfg = sweep_config();
    PowerModelParams pm;
    const SweepTable table = vdd_sweep(cfg, 300.0, {0.8}, pm);
    const SweepPoint chosen =
        optimal_vdd(table.points, SweepObjective::MIN_RETENTION_POWER);
    CHECK(chosen.vdd == doctest::Approx(0.8));
}

TEST_CASE("grid outside the calibrated window needs the override") {
    const ArrayConfig cfg = sweep_config();
    PowerModelParams pm;
    CHECK_THROWS_AS(vdd_sweep(cfg, 300.0, {0.5, 1.1}, pm), DomainError);
    const SweepTable table =
        vdd_sweep(cfg, 300.0, {0.5, 1.1}, pm, {}, 1.0, 1, /*allow_extended=*/true);
    CHECK(table.extended_range);
}

TEST_CASE("joint DVS+DRPS relaxes the period within the error budget") {
    const ArrayConfig cfg = sweep_config();
    PowerModelParams pm;
    const DvsDrpsResult strict = joint_dvs_drps(cfg, 300.0, 0.0, pm);
    const DvsDrpsResult relaxed = joint_dvs_drps(cfg, 300.0, 0.2, pm);
    CHECK(strict.period > 0.0);
    CHECK(relaxed.p_retention <= strict.p_retention * (1.0 + 1e-9));
    CHECK_THROWS_AS(joint_dvs_drps(cfg, 300.0, 1.5, pm), DomainError);
}
