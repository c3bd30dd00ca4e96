#include <doctest.h>

#include <cmath>

#include "cqsedram/array.hpp"

using namespace cqsedram;

namespace {

ArrayConfig small_config() {
    ArrayConfig cfg;
    cfg.rows = 8;
    cfg.cols = 16;
    cfg.dev.i_sub0 = 1e-30;
    cfg.dev.i_floor = 1e-15;
    cfg.sigma_vth_mismatch = 1.5e-3;
    cfg.retention_jitter_room = 0.1;
    cfg.retention_jitter_cryo = 0.002;
    return cfg;
}

}  // namespace

TEST_CASE("sampling is invariant to worker count and repeatable") {
    const ArrayConfig cfg = small_config();
    const ThermalOperatingPoint op{300.0, 1.1};
    const RetentionMap m1 = sample_array(cfg, op, 1);
    const RetentionMap m4 = sample_array(cfg, op, 4);
    const RetentionMap m7 = sample_array(cfg, op, 7);
    REQUIRE(m1.retention.size() == m4.retention.size());
    for (size_t i = 0; i < m1.retention.size(); ++i) {
        CHECK(m1.retention[i] == m4.retention[i]);
        CHECK(m1.retention[i] == m7.retention[i]);
    }
}

TEST_CASE("different seeds give different maps") {
    ArrayConfig cfg = small_config();
    const ThermalOperatingPoint op{300.0, 1.1};
    const RetentionMap a = sample_array(cfg, op);
    cfg.seed = 1;
    const RetentionMap b = sample_array(cfg, op);
    CHECK(a.retention != b.retention);
}

TEST_CASE("zero variability collapses the map to one value") {
    ArrayConfig cfg = small_config();
    cfg.sigma_vth_mismatch = 0.0;
    cfg.retention_jitter_room = 0.0;
    cfg.retention_jitter_cryo = 0.0;
    const RetentionMap m = sample_array(cfg, {300.0, 1.1});
    CHECK(m.std == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(m.min == doctest::Approx(m.max).epsilon(1e-9));
}

TEST_CASE("array_stats matches a hand-computed summary") {
    RetentionMap map;
    map.rows = 2;
    map.cols = 2;
    map.retention = {1.0, 2.0, 3.0, 4.0};
    const ArrayStats s = array_stats(map);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.std == doctest::Approx(1.118033988749895));
    CHECK(s.min == doctest::Approx(1.0));
    CHECK(s.max == doctest::Approx(4.0));
    CHECK(s.cv == doctest::Approx(1.118033988749895 / 2.5));
}

TEST_CASE("sampled spread tracks the jitter parameter") {
    ArrayConfig cfg = small_config();
    cfg.rows = 32;
    cfg.cols = 32;
    cfg.sigma_vth_mismatch = 0.0;
    cfg.retention_jitter_room = 0.10;
    const RetentionMap m = sample_array(cfg, {300.0, 1.1}, 4);
    CHECK(m.cv == doctest::Approx(0.10).epsilon(0.15));
}

TEST_CASE("chip ensemble is normalized to chip 0") {
    ArrayConfig cfg = small_config();
    cfg.chip_leak_scale_sigma = 0.05;
    const auto chips = chip_ensemble(cfg, {300.0, 1.1}, 4);
    REQUIRE(chips.size() == 4);
    CHECK(chips[0].mean_rel == doctest::Approx(1.0));
    CHECK(chips[0].std_rel == doctest::Approx(1.0));
    bool any_different = false;
    for (const auto& c : chips) {
        if (std::abs(c.mean_rel - 1.0) > 1e-6) any_different = true;
    }
    CHECK(any_different);
    CHECK_THROWS_AS(chip_ensemble(cfg, {300.0, 1.1}, 0), UsageError);
}
