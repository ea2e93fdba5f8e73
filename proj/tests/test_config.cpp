#include <doctest.h>

#include "levymmm/config.hpp"
#include "levymmm/errors.hpp"

using namespace levymmm;

namespace {

const char* kBmConfig = R"(
# Brownian benchmark
model.drift  = -0.5
model.sigma2 = 1.0
model.jumps.kind = none   # pure diffusion

regime.nu = auto
regime.p = 0
regime.q = 0

numerics.dt = 0.01
mc.n = 500
mc.master_seed = 42
output.directory = out_test
)";

}  // namespace

TEST_CASE("parse happy path and defaults") {
    ExperimentConfig cfg = parse_config_text(kBmConfig);
    CHECK(cfg.model.drift_a == -0.5);
    CHECK(cfg.model.sigma2 == 1.0);
    CHECK(std::holds_alternative<NoJumps>(cfg.model.jumps));
    CHECK(!cfg.nu.has_value());
    CHECK(cfg.dt == 0.01);
    CHECK(cfg.n == 500);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.out_dir == "out_test");
    CHECK(cfg.delta == 0.01);
    CHECK(cfg.doubling_cap == 6);
    // default grid -2..5 step 1
    CHECK(cfg.t_grid.front() == -2.0);
    CHECK(cfg.t_grid.back() == 5.0);
    CHECK(cfg.t_grid.size() == 8);

    double nu = resolved_nu(cfg);
    CHECK(nu == doctest::Approx(1.0).epsilon(1e-12));
    SimParams sp = resolved_sim(cfg, nu);
    CHECK(sp.horizon == doctest::Approx(40.0));
    CHECK(sp.margin == doctest::Approx(10.0));
    FieldConfig fc = resolved_field(cfg, nu, 0.5);
    CHECK(fc.pad == doctest::Approx(30.0));
}

TEST_CASE("parse jump variants and explicit grid") {
    ExperimentConfig cfg = parse_config_text(R"(
model.drift = -0.3
model.sigma2 = 1.0
model.jumps.kind = double_exp
model.jumps.rate = 1.0
model.jumps.p_up = 0.5
model.jumps.eta_up = 3.0
model.jumps.eta_down = 3.0
field.t_grid = -2, 0, 2, 5
regime.nu = 0.9
)");
    CHECK(std::holds_alternative<DoubleExpJumps>(cfg.model.jumps));
    CHECK(cfg.t_grid == std::vector<double>{-2.0, 0.0, 2.0, 5.0});
    CHECK(*cfg.nu == 0.9);

    ExperimentConfig one = parse_config_text(R"(
model.drift = -0.3
model.sigma2 = 1.0
model.jumps.kind = one_sided_exp
model.jumps.sign = down
model.jumps.rate = 0.5
model.jumps.eta = 2.0
)");
    CHECK(std::get<OneSidedExpJumps>(one.model.jumps).sign == JumpSign::negative);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("model.drift = -0.5\n"), ConfigError);  // missing sigma2
    CHECK_THROWS_AS(parse_config_text("model.drift = -0.5\nmodel.sigma2 = 1\nbogus.key = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("model.drift = -0.5\nmodel.sigma2 = abc\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("model.drift -0.5\nmodel.sigma2 = 1\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("model.drift = -0.5\nmodel.sigma2 = 1\nregime.p = 1\nregime.q = 0\n"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("model.drift = -0.5\nmodel.sigma2 = 0\n"),  // invalid model
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("model.drift = -0.5\nmodel.sigma2 = 1\nmodel.drift = -0.5\n"),
        ConfigError);  // duplicate
    CHECK_THROWS_AS(
        parse_config_text("model.drift = -0.5\nmodel.sigma2 = 1\nfield.t_grid = 1, 1\n"),
        ConfigError);  // not strictly increasing
}
