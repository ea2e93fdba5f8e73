#include <doctest.h>

#include "levymmm/io.hpp"
#include "levymmm/suites.hpp"

using namespace levymmm;

namespace {

ExperimentConfig bm_config(const std::string& extra = "") {
    return parse_config_text("model.drift = -0.5\nmodel.sigma2 = 1.0\n" + extra);
}

}  // namespace

TEST_CASE("deterministic suites pass on the Brownian benchmark") {
    ExperimentConfig cfg = bm_config();
    for (const std::string name : {"constants", "ladder", "tilt"}) {
        auto reports = run_suite(name, cfg, 7);
        CHECK(!reports.empty());
        for (const auto& r : reports) {
            INFO(name, "/", r.name, " statistic=", r.statistic);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("deterministic suites pass on one-sided jump models") {
    ExperimentConfig cfg = parse_config_text(
        "model.drift = -0.3\nmodel.sigma2 = 1.0\n"
        "model.jumps.kind = one_sided_exp\nmodel.jumps.sign = down\n"
        "model.jumps.rate = 0.5\nmodel.jumps.eta = 2.0\n");
    for (const std::string name : {"constants", "ladder", "tilt"}) {
        for (const auto& r : run_suite(name, cfg, 11)) {
            INFO(name, "/", r.name);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("suite reports are deterministic") {
    ExperimentConfig cfg = bm_config();
    auto a = run_suite("ladder", cfg, 99);
    auto b = run_suite("ladder", cfg, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].statistic == b[i].statistic);
    }
    CHECK_THROWS_AS(run_suite("no_such_suite", cfg, 1), ConfigError);
}

TEST_CASE("identity suites at smoke scale") {
    ExperimentConfig cfg = bm_config(
        "mc.n = 1500\nnumerics.dt = 0.02\nnumerics.horizon = 30\n"
        "numerics.window = 3\nnumerics.margin = 8\nmc.workers = 2\n");
    auto reports = run_suite("corollary_identity", cfg, 5);
    CHECK(reports.size() == 12 + 3);
    int fails = 0;
    for (const auto& r : reports) {
        REQUIRE(r.z_score.has_value());
        if (!r.pass) ++fails;
        CHECK(std::fabs(*r.z_score) < 5.0);
    }
    CHECK(fails <= 1);

    ExperimentConfig killed = bm_config(
        "mc.n = 3000\nnumerics.dt = 0.02\nregime.p = 1\nregime.q = 1\nmc.workers = 2\n");
    auto kreports = run_suite("killed_identity", killed, 6);
    CHECK(kreports.size() == 6);
    for (const auto& r : kreports) {
        REQUIRE(r.z_score.has_value());
        CHECK(std::fabs(*r.z_score) < 5.0);
    }
}

TEST_CASE("field suites at smoke scale") {
    ExperimentConfig cfg = bm_config(
        "mc.n = 400\nnumerics.dt = 0.05\nnumerics.horizon = 10\nnumerics.window = 2\n"
        "numerics.margin = 5\nnumerics.pad = 12\nmc.workers = 2\n"
        "field.t_grid = -1, 0, 1\n");
    for (const auto& r : run_suite("psi1_psi2", cfg, 12)) {
        INFO(r.name, " p=", r.p_value ? *r.p_value : -1.0);
        CHECK(r.pass);
    }
    for (const auto& r : run_suite("maxstability", cfg, 13)) {
        CHECK(r.pass);
    }
    ExperimentConfig scfg = bm_config(
        "mc.n = 400\nnumerics.dt = 0.05\nnumerics.horizon = 10\nnumerics.window = 2\n"
        "numerics.margin = 5\nnumerics.pad = 12\nmc.workers = 2\n"
        "field.t_grid = 0, 2\n");
    for (const auto& r : run_suite("stationarity", scfg, 14)) {
        CHECK(r.pass);
    }
}

TEST_CASE("report json round trip") {
    TestReport r;
    r.name = "demo";
    r.statistic = 0.5;
    r.p_value = 0.2;
    r.pass = true;
    r.n = 10;
    auto j = to_json(r);
    CHECK(j["name"] == "demo");
    CHECK(j["p_value"] == 0.2);
    CHECK(!j.contains("z_score"));
}

TEST_CASE("constants json reporting") {
    auto bm = to_json(compute_constants(brownian_motion(-0.5, 1.0), std::nullopt, 1.0, 1.0));
    CHECK(bm["nu"] == doctest::Approx(1.0));
    CHECK(bm["c0"] == doctest::Approx(0.5));
    CHECK(bm["c_killed"] == doctest::Approx(2.0));
    CHECK(bm["method"] == "brownian");
    CHECK(!bm.contains("note"));

    // two-sided jump models have no closed form; the record says so
    LevyModel kou{-0.3, 1.0, DoubleExpJumps{1.0, 0.5, 3.0, 3.0}};
    auto j = to_json(compute_constants(kou, std::nullopt));
    CHECK(!j.contains("c0"));
    CHECK(j["method"] == "monte_carlo");
    CHECK(j.contains("note"));
}
