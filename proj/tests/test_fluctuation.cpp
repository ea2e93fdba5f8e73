#include <doctest.h>

#include <cmath>

#include "levymmm/fluctuation.hpp"
#include "levymmm/rng.hpp"
#include "test_support.hpp"

using namespace levymmm;

namespace {

// Independent bisection-only root of psi on (0, hi]; oracle for find_nu.
double bisect_nu(const LevyModel& m, double hi) {
    double lo = 1e-12;
    REQUIRE(psi(m, lo) < 0.0);
    REQUIRE(psi(m, hi) > 0.0);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (psi(m, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("find_nu") {
    CHECK(find_nu(brownian_motion(-0.5, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(find_nu(brownian_motion(-1.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(find_nu(brownian_motion(-0.7, 2.5)) ==
          doctest::Approx(2.0 * 0.7 / 2.5).epsilon(1e-12));

    LevyModel gj{-0.5, 1.0, GaussianJumps{0.5, 0.0, 0.25}};
    double nu = find_nu(gj);
    CHECK(std::fabs(psi(gj, nu)) < 1e-12);
    CHECK(nu == doctest::Approx(bisect_nu(gj, 2.0)).epsilon(1e-10));

    for (const auto& m : test::drifting_catalog()) {
        double r = find_nu(m);
        CHECK(r > 0.0);
        CHECK(std::fabs(psi(m, r)) < 1e-12);
    }

    CHECK_THROWS_AS(find_nu(brownian_motion(0.5, 1.0)), NotDriftingError);
}

TEST_CASE("phi right inverse") {
    LevyModel bm = brownian_motion(-0.5, 1.0);
    CHECK(phi(bm, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(phi(bm, 1.0) == doctest::Approx(2.0).epsilon(1e-12));  // right root of the quadratic

    RngStream rng(5);
    for (const LevyModel& m :
         {bm, test::spectrally_negative_jump_model(), brownian_motion(-1.0, 1.0)}) {
        for (int i = 0; i < 100; ++i) {
            double q = 10.0 * rng.uniform();
            CHECK(std::fabs(psi(m, phi(m, q)) - q) < 1e-10);
        }
        // strictly increasing on a sampled grid
        double prev = phi(m, 0.0);
        for (int i = 1; i <= 20; ++i) {
            double cur = phi(m, 0.5 * i);
            CHECK(cur > prev);
            prev = cur;
        }
    }

    CHECK_THROWS_AS(phi(LevyModel{-0.5, 1.0, OneSidedExpJumps{JumpSign::positive, 0.5, 3.0}},
                        1.0),
                    ApplicabilityError);
}

TEST_CASE("ladder exponents") {
    LevyModel bm = brownian_motion(-0.5, 1.0);
    auto k = ladder_exponents(bm, 1.0, 0.0);
    CHECK(k.k_up == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(k.k_down == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k.k_up * k.k_down == doctest::Approx(1.0).epsilon(1e-12));

    // removable singularity: k_down(0, nu) = psi'(nu)
    auto k0 = ladder_exponents(bm, 0.0, 1.0);
    CHECK(k0.k_down == doctest::Approx(psi_prime(bm, 1.0)).epsilon(1e-9));

    RngStream rng(17);
    for (const LevyModel& m : {bm, test::spectrally_negative_jump_model(),
                               LevyModel{-0.5, 1.0,
                                         OneSidedExpJumps{JumpSign::positive, 0.5, 3.0}}}) {
        double nu = find_nu(m);
        double psi_nu = psi(m, nu);
        LevyModel tilted = esscher_tilt(m, nu);
        for (int i = 0; i < 60; ++i) {
            double p = 10.0 * rng.uniform() + 1e-3;
            auto kk = ladder_exponents(m, p, 0.0);
            CHECK(std::fabs(kk.k_up * kk.k_down - p) < 1e-10 * std::max(1.0, p));

            double a = 5.0 * rng.uniform();
            double b = 2.0 * rng.uniform();
            auto kt = ladder_exponents(tilted, a, b);
            auto kb = ladder_exponents(m, a + psi_nu, b + nu);
            CHECK(kt.k_down == doctest::Approx(kb.k_down).epsilon(1e-9));
            auto ku = ladder_exponents(m, a + psi_nu, b - nu);
            CHECK(kt.k_up == doctest::Approx(ku.k_up).epsilon(1e-9));
        }
    }

    CHECK_THROWS_AS(ladder_exponents(test::two_sided_jump_model(), 1.0, 0.0),
                    ApplicabilityError);
}

TEST_CASE("c0") {
    CHECK(c0(brownian_motion(-0.5, 1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    // 2 mu^2 / sigma^2 for general BM
    LevyModel bm2 = brownian_motion(-0.8, 1.7);
    double nu2 = find_nu(bm2);
    CHECK(c0(bm2, nu2) == doctest::Approx(2.0 * 0.64 / 1.7).epsilon(1e-10));

    LevyModel sn = test::spectrally_negative_jump_model();
    double nus = find_nu(sn);
    CHECK(c0(sn, nus) == doctest::Approx(nus * psi_prime(sn, nus)).epsilon(1e-12));

    LevyModel sp{-0.5, 1.0, OneSidedExpJumps{JumpSign::positive, 0.5, 3.0}};
    double nup = find_nu(sp);
    CHECK(c0(sp, nup) == doctest::Approx(-nup * psi_prime(sp, 0.0)).epsilon(1e-12));

    CHECK_THROWS_AS(c0(test::two_sided_jump_model(), find_nu(test::two_sided_jump_model())),
                    ApplicabilityError);
    CHECK_THROWS_AS(c0(brownian_motion(-0.5, 1.0), 0.5), std::invalid_argument);
}

TEST_CASE("c_killed") {
    LevyModel bm = brownian_motion(-0.5, 1.0);
    CHECK(c_killed(bm, 1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

    // dual formula agreement on BM (both one-sided)
    LevyModel hat = negate_model(bm);
    RngStream rng(23);
    for (int i = 0; i < 40; ++i) {
        double p = 2.0 * rng.uniform() + 1e-3;
        double q = 2.0 * rng.uniform() + 1e-3;
        double c_sn = c_killed(bm, 1.0, p, q);
        double c_sp = q * (phi(hat, p + psi(bm, 1.0)) + 1.0) / phi(hat, q);
        CHECK(c_sn == doctest::Approx(c_sp).epsilon(1e-10));
    }

    // p, q -> 0 recovers c0
    for (const LevyModel& m : {bm, test::spectrally_negative_jump_model()}) {
        double nu = find_nu(m);
        double target = c0(m, nu);
        CHECK(std::fabs(c_killed(m, nu, 1e-8, 1e-8) - target) < 1e-6);
    }

    CHECK_THROWS_AS(c_killed(test::two_sided_jump_model(), 0.5, 1.0, 1.0),
                    ApplicabilityError);
}

TEST_CASE("compute_constants") {
    auto fc = compute_constants(brownian_motion(-0.5, 1.0), std::nullopt);
    CHECK(fc.nu == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fc.mean == doctest::Approx(-0.5));
    CHECK(fc.psi_prime_nu == doctest::Approx(0.5));
    REQUIRE(fc.c0.has_value());
    CHECK(*fc.c0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fc.method == ConstantsMethod::brownian);
    CHECK(!fc.c_killed.has_value());

    auto fk = compute_constants(brownian_motion(-0.5, 1.0), 1.0, 1.0, 1.0);
    REQUIRE(fk.c_killed.has_value());
    CHECK(*fk.c_killed == doctest::Approx(2.0).epsilon(1e-12));

    auto f2 = compute_constants(test::two_sided_jump_model(), std::nullopt);
    CHECK(!f2.c0.has_value());
    CHECK(f2.method == ConstantsMethod::monte_carlo);

    auto fsp = compute_constants(
        LevyModel{-0.5, 1.0, OneSidedExpJumps{JumpSign::positive, 0.5, 3.0}}, std::nullopt);
    CHECK(fsp.method == ConstantsMethod::spectrally_positive);
    REQUIRE(fsp.c0.has_value());
}
