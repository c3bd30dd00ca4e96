#include <doctest.h>

#include <string>

#include "cqsedram/calibration.hpp"
#include "cqsedram/report.hpp"

using namespace cqsedram;

TEST_CASE("anchor file parsing") {
    const std::string doc =
        "schema = cqsedram-anchors v1\n"
        "ret_300k_1v1_s = 112.09e-6  # Fig. 3d\n"
        "cv_300k = 0.150\n";
    const CalibrationTargets t = load_targets(doc);
    CHECK(t.get("ret_300k_1v1_s") == doctest::Approx(112.09e-6));
    CHECK(t.get("cv_300k") == doctest::Approx(0.150));
    CHECK(!t.has("missing"));
    CHECK(t.get_or("missing", 7.0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(t.get("missing"), CalibrationError);

    CHECK_THROWS_AS(load_targets("ret = 1\n"), ParseError);  // no schema
    CHECK_THROWS_AS(load_targets("schema = cqsedram-anchors v1\nx = abc\n"), ParseError);
    CHECK_THROWS_AS(load_targets("schema = bogus v1\n"), ParseError);
}

TEST_CASE("profile round-trips byte-identically") {
    CalibrationProfile p;
    p.dev.i_sub0 = 3.2041769e-6;
    p.dev.i_floor = 8.2087e-18;
    p.dev.leak_vdd_shape_cryo = {0.51, 8.59, 9.08};
    p.cell.disturb_gain = 1.48;
    p.sigma_vth_mismatch = 1.51e-3;
    p.retention_jitter_room = 0.1431;
    p.residuals["ret_300k_1v1_s"] = 1.2e-9;

    const std::string text = profile_to_text(p);
    const CalibrationProfile q = load_profile(text);
    CHECK(profile_to_text(q) == text);
    CHECK(q.dev.i_sub0 == p.dev.i_sub0);
    CHECK(q.dev.leak_vdd_shape_cryo[2] == p.dev.leak_vdd_shape_cryo[2]);
    CHECK(q.residuals.at("ret_300k_1v1_s") == p.residuals.at("ret_300k_1v1_s"));
}

TEST_CASE("profile parser rejects unknown keys and schemas") {
    CHECK_THROWS_AS(load_profile("i_sub0_A = 1e-6\n"), ParseError);  // no schema
    CHECK_THROWS_AS(load_profile("schema = cqsedram-profile v2\n"), ParseError);
    CHECK_THROWS_AS(
        load_profile("schema = cqsedram-profile v1\nbogus_key = 1\n"), ParseError);
    CHECK_THROWS_AS(
        load_profile("schema = cqsedram-profile v1\ni_sub0_A = x\n"), ParseError);
}

TEST_CASE("profile hash is stable and content-sensitive") {
    CalibrationProfile p;
    const std::string h1 = profile_hash(p);
    CHECK(h1 == profile_hash(p));
    CalibrationProfile q = p;
    q.dev.i_sub0 *= 2.0;
    CHECK(profile_hash(q) != h1);
    // FNV-1a reference value for the empty string.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("report formatting embeds provenance and is deterministic") {
    RetentionMap map;
    map.rows = 1;
    map.cols = 3;
    map.retention = {1.0, 2.0, 3.0};
    const std::string prov = provenance_header("deadbeef", 5);
    const std::string a = format_heat_map(map, prov);
    const std::string b = format_heat_map(map, prov);
    CHECK(a == b);
    CHECK(a.find("profile_hash = deadbeef") != std::string::npos);
    CHECK(a.find("seed = 5") != std::string::npos);
}
