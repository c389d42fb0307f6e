#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "snbif/errors.hpp"
#include "snbif/model.hpp"
#include "support.hpp"

using namespace snbif;

TEST_CASE("derivative values") {
    const BasePoint none{};
    auto d = eval_derivatives(RhsModel::cubic(0, 1, 0, -1), none, 1.0);
    CHECK(d.f == doctest::Approx(0.0));
    CHECK(d.fx == doctest::Approx(-2.0));
    CHECK(d.fxx == doctest::Approx(-6.0));
    CHECK(d.fxxx == doctest::Approx(-6.0));
    CHECK_FALSE(d.piecewise);

    const auto dz = RhsModel::deadzone(TrigPoly::constant(0.5));
    d = eval_derivatives(dz, none, 0.25);
    CHECK(d.f == 0.0);
    CHECK(d.fx == 0.0);
    CHECK(d.fxx == 0.0);
    CHECK(d.fxxx == 0.0);
    d = eval_derivatives(dz, none, 1.5);
    CHECK(d.f == doctest::Approx(-1.0));
    CHECK(d.fx == doctest::Approx(-3.0));
    CHECK(d.fxx == doctest::Approx(-6.0));
    CHECK(d.fxxx == doctest::Approx(-6.0));
    CHECK(d.piecewise);
    d = eval_derivatives(dz, none, -1.5);
    CHECK(d.f == doctest::Approx(1.0));
    CHECK(d.fx == doctest::Approx(-3.0));
    CHECK(d.fxx == doctest::Approx(6.0));
}

TEST_CASE("trig poly evaluation and bounds") {
    const auto p = testing_support::wave1(0.5, 0.25, {1, 2}, 0.3);
    const std::array<double, 2> th{0.1, 0.2};
    CHECK(p(th) == doctest::Approx(0.5 + 0.25 * std::cos(2 * std::numbers::pi * 0.5 + 0.3)));
    CHECK(p.sup_bound() == doctest::Approx(0.75));
    CHECK(p.upper_bound() == doctest::Approx(0.75));
    CHECK(p.lower_bound() == doctest::Approx(0.25));
    CHECK_FALSE(p.is_constant());
    CHECK(TrigPoly::constant(0).is_zero());
}

TEST_CASE("finite differences agree with analytic derivatives") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
    const auto cubic = RhsModel::cubic(testing_support::wave1(0.2, 0.3, {1, 0}), testing_support::wave1(-0.4, 0.5, {0, 1}),
                                       testing_support::wave1(0.1, 0.7, {1, 1}), testing_support::wave1(-2.0, 0.5, {2, -1}));
    const auto dz = RhsModel::deadzone(testing_support::wave1(0.3, 0.2, {1, 0}));
    const double h = 1e-4;
    int checked = 0;
    while (checked < 1000) {
        const BasePoint w{{u01(rng), u01(rng)}};
        const double x = 2.0 * u(rng);
        for (const auto* m : {&cubic, &dz}) {
            if (m == &dz) {
                const double wv = coefficients_at(dz, w.theta).w;
                if (std::abs(std::abs(x) - wv) < 10 * h) continue;
            }
            const auto d = eval_derivatives(*m, w, x);
            const auto p = eval_derivatives(*m, w, x + h), q = eval_derivatives(*m, w, x - h);
            const double fx = (p.f - q.f) / (2 * h), fxx = (p.fx - q.fx) / (2 * h);
            CHECK(fx == doctest::Approx(d.fx).epsilon(1e-6).scale(1.0));
            CHECK(fxx == doctest::Approx(d.fxx).epsilon(1e-6).scale(1.0));
        }
        ++checked;
    }
}

TEST_CASE("divided differences") {
    const BasePoint none{};
    const auto sq = RhsModel::cubic(0, 0, 1, 0);
    const std::array<double, 2> a{1, 2};
    const std::array<double, 3> b{1, 2, 3};
    CHECK(divided_difference(sq, none, a) == doctest::Approx(3.0));
    CHECK(divided_difference(sq, none, b) == doctest::Approx(1.0));
    const std::array<double, 3> c{0, 1, 2};
    CHECK(divided_difference(RhsModel::cubic(0, 0, 0, 1), none, c) == doctest::Approx(3.0));
    const std::array<double, 2> same{1, 1};
    CHECK_THROWS_WITH_AS(divided_difference(sq, none, same), "distinct abscissae required", DomainError);
}

TEST_CASE("second differences are symmetric") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto m = RhsModel::cubic(0.3, -0.2, 0.9, -1.4);
    const BasePoint none{};
    for (int i = 0; i < 200; ++i) {
        std::array<double, 3> xs{u(rng), u(rng), u(rng)};
        const double ref = divided_difference(m, none, xs);
        std::sort(xs.begin(), xs.end());
        do {
            CHECK(divided_difference(m, none, xs) == doctest::Approx(ref).epsilon(1e-9));
        } while (std::next_permutation(xs.begin(), xs.end()));
    }
}

TEST_CASE("d-concave models order second differences") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0), u01(0.0, 1.0);
    const auto cubic = RhsModel::cubic(testing_support::wave1(0.2, 0.3, {1}), testing_support::wave1(0.0, 0.5, {1}),
                                       testing_support::wave1(0.1, 0.7, {1}), testing_support::wave1(-1.0, 0.5, {1}));
    const auto dz = RhsModel::deadzone(testing_support::wave1(0.25, -0.25, {1}));
    for (const auto* m : {&cubic, &dz}) {
        for (int i = 0; i < 1000; ++i) {
            const BasePoint w{{u01(rng)}};
            std::array<double, 3> s{u(rng), u(rng), u(rng)};
            std::sort(s.begin(), s.end());
            double x0 = u(rng);
            if (s[0] == s[1] || s[1] == s[2] || x0 == s[0] || x0 == s[1] || x0 == s[2]) continue;
            const std::array<double, 3> lo{s[0], x0, s[1]}, hi{s[0], x0, s[2]};
            CHECK(divided_difference(*m, w, lo) >= divided_difference(*m, w, hi) - 1e-12);
        }
    }
}

TEST_CASE("orbit coefficients match direct evaluation") {
    const auto spec = BaseFlowSpec::golden();
    const auto m = RhsModel::cubic(testing_support::wave1(0.2, 0.3, {1, 0}), TrigPoly::constant(0.0),
                                   testing_support::wave1(0.1, 0.7, {1, -1}, 0.4), TrigPoly::constant(-1.0));
    const BasePoint w{{0.3, 0.8}};
    const OrbitCoefficients oc(m, spec, w);
    for (double s : {0.0, 1.5, -7.25, 1234.5}) {
        const auto a = oc.at(s);
        const auto b = coefficients_at(m, advance(spec, w, s).theta);
        for (int k = 0; k < 4; ++k) CHECK(a.c[k] == doctest::Approx(b.c[k]).epsilon(1e-9));
    }
}
