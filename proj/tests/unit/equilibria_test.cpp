#include <doctest.h>

#include <cmath>

#include "snbif/equilibria.hpp"
#include "snbif/errors.hpp"
#include "support.hpp"

using namespace snbif;
using testing_support::cubic;

namespace {
const BasePoint kNone{};
}

TEST_CASE("bracketing bounds enclose the sign changes") {
    for (double lambda : {0.0, 10.0, -3.0}) {
        const Scenario s = cubic(0, 1, 0, -1);
        const auto [r1, r2] = bracketing_bounds(s, lambda);
        CHECK(r1 == -r2);
        for (double x = r2; x < r2 + 50; x += 0.25) {
            CHECK(-x * x * x + x + lambda < 0.0);
            CHECK(x * x * x - x + lambda > 0.0);
        }
    }
    CHECK(bracketing_bounds(cubic(0, 0, 0, -1), 0.0).second == doctest::Approx(1.0));
    CHECK(bracketing_bounds(cubic(0, 1, 0, -1), 10.0).second >= 12.0);
    CHECK_THROWS_AS(bracketing_bounds(cubic(0, 1, 0, 0), 0.0), ModelError);
    CHECK_FALSE(coercive_radius(cubic(0, 1, 0, 0.5), 0.0).has_value());
}

TEST_CASE("pullback limits") {
    CHECK(std::abs(pullback_equilibrium(cubic(0, 1, 0, -1), 0.0, kNone, Side::Upper).value - 1.0) < 1e-8);
    CHECK(std::abs(pullback_equilibrium(cubic(0, 1, 0, -1), 0.0, kNone, Side::Lower).value + 1.0) < 1e-8);
    CHECK(pullback_equilibrium(cubic(0, 1, 0, -1), 0.5, kNone, Side::Upper).value ==
          doctest::Approx(1.1914878).epsilon(1e-6));
    for (Side side : {Side::Lower, Side::Upper}) {
        const auto r = pullback_equilibrium(cubic(0, 0, 0, -1), 0.0, kNone, side);
        CHECK(std::abs(r.value) < 1e-6);
        CHECK(r.horizon > 64.0);
    }
}

TEST_CASE("pullback runs that cannot settle report it") {
    Scenario s = cubic(0, 0, 0, -1);
    s.numerics.pullback_tol = 1e-300;
    s.numerics.pinch_tol = 1e-301;
    s.numerics.pullback_T = 1.0;
    const auto run = pullback_orbit(s, 0.0, kNone, {0.0}, Side::Upper);
    CHECK_FALSE(run.converged);
    CHECK(run.horizon == pullback_cap(s));
    CHECK(run.monotone_defect <= 1e-12);
    CHECK_THROWS_AS(pullback_equilibrium(s, 0.0, kNone, Side::Upper), NonConvergence);
}

TEST_CASE("repeller bisection") {
    const Scenario s = cubic(0, 1, 0, -1);
    const auto k0 = bisect_repeller(s, 0.0, kNone, -1.0, 1.0);
    REQUIRE(k0.has_value());
    CHECK(std::abs(*k0) < 1e-9);

    const double a = pullback_equilibrium(s, 0.2, kNone, Side::Lower).value;
    const double b = pullback_equilibrium(s, 0.2, kNone, Side::Upper).value;
    const auto k = bisect_repeller(s, 0.2, kNone, a, b);
    REQUIRE(k.has_value());
    // middle root of x^3 - x - 0.2
    CHECK(*k == doctest::Approx(-0.20905).epsilon(1e-4));
    CHECK(std::abs(*k * *k * *k - *k - 0.2) < 1e-8);

    const double c = pullback_equilibrium(s, 0.5, kNone, Side::Upper).value;
    CHECK_FALSE(bisect_repeller(s, 0.5, kNone, c - 0.5, c).has_value());
    CHECK_THROWS_AS(bisect_repeller(s, 0.0, kNone, 0.0, 0.0005), DomainError);
}

TEST_CASE("Lyapunov exponents") {
    Scenario s = cubic(0, 1, 0, -1);
    s.numerics.birkhoff_T = 1000.0;
    CHECK(lyapunov_exponent(s, 0.0, kNone, Track::Beta) == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(lyapunov_exponent(s, 0.0, kNone, Track::Alpha) == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(std::abs(lyapunov_exponent(s, 0.0, kNone, Track::Kappa) - 1.0) < 1e-3);

    Scenario lin = cubic(0, 0, 0, -1, Family::Linear);
    lin.numerics.birkhoff_T = 1000.0;
    CHECK(std::abs(lyapunov_exponent(lin, 0.4, kNone, Track::Beta) + 0.8) < 1e-3);
    CHECK(zero_section_exponent(lin, 0.4, kNone) == doctest::Approx(0.4));
}

TEST_CASE("exponent classification uses the margin") {
    CHECK(classify_exponent(-0.1, 1e-3) == Hyperbolicity::Attractive);
    CHECK(classify_exponent(0.1, 1e-3) == Hyperbolicity::Repulsive);
    CHECK(classify_exponent(5e-4, 1e-3) == Hyperbolicity::NonhyperbolicEvidence);
    CHECK(classify_exponent(-1e-3, 1e-3) == Hyperbolicity::NonhyperbolicEvidence);
}

TEST_CASE("census on autonomous cubics") {
    SUBCASE("three minimal sets") {
        const auto r = census(cubic(0, 1, 0, -1), 0.0);
        CHECK_FALSE(r.degraded);
        REQUIRE(r.count == 3);
        REQUIRE(r.sets.size() == 3);
        CHECK(r.sets[0].role == "lower");
        CHECK(r.sets[1].role == "middle");
        CHECK(*r.sets[0].exponent == doctest::Approx(-2.0).epsilon(1e-3));
        CHECK(*r.sets[1].exponent == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(*r.sets[2].exponent == doctest::Approx(-2.0).epsilon(1e-3));
        CHECK(r.sets[1].hyperbolicity == Hyperbolicity::Repulsive);
        CHECK_FALSE(r.pinched);
    }
    SUBCASE("one attractive set") {
        const auto r = census(cubic(0, 1, 0, -1), 0.5);
        CHECK(r.count == 1);
        REQUIRE(r.sets.size() == 1);
        CHECK(r.sets[0].hyperbolicity == Hyperbolicity::Attractive);
    }
    SUBCASE("nonhyperbolic single set") {
        const auto r = census(cubic(0, 0, 0, -1), 0.0);
        CHECK(r.count == 1);
        REQUIRE(r.sets.size() == 1);
        CHECK(r.sets[0].hyperbolicity == Hyperbolicity::NonhyperbolicEvidence);
    }
}

TEST_CASE("census on the quasiperiodic showcase") {
    Scenario s = testing_support::showcase(TrigPoly::constant(0.0));
    s.numerics.grid_n = 16;
    s.numerics.birkhoff_T = 500.0;
    const auto r = census(s, 0.25);
    CHECK_FALSE(r.degraded);
    CHECK(r.count == 3);
    CHECK(r.lower_branch);
    CHECK(r.upper_branch);
    REQUIRE(r.gamma_zero.has_value());
    CHECK(*r.gamma_zero == doctest::Approx(0.25));
    // odd field: the delimiters mirror each other
    REQUIRE(r.sample.alpha.size() == r.sample.beta.size());
    for (std::size_t i = 0; i < r.sample.alpha.size(); ++i) {
        CHECK(std::abs(r.sample.alpha[i] + r.sample.beta[i]) < 1e-8);
        CHECK(r.sample.alpha[i] <= r.sample.beta[i]);
    }

    const auto below = census(s, -0.25);
    CHECK(below.count == 1);
    CHECK_FALSE(below.lower_branch);
    CHECK_FALSE(below.upper_branch);
}
