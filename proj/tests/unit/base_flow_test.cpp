#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "snbif/base_flow.hpp"
#include "snbif/errors.hpp"

using namespace snbif;

namespace {
constexpr double g = 0.6180339887498949;
}

TEST_CASE("advance") {
    CHECK(advance(BaseFlowSpec::autonomous(), BasePoint{}, 3.7).theta.empty());
    CHECK(advance(BaseFlowSpec::periodic(1.0), BasePoint{{0.25}}, 0.5).theta[0] == doctest::Approx(0.75));
    const auto p = advance(BaseFlowSpec::golden(), BasePoint{{0.0, 0.0}}, 2.0);
    CHECK(p.theta[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.theta[1] == doctest::Approx(0.2360679775).epsilon(1e-10));
    const auto back = advance(BaseFlowSpec::periodic(1.0), BasePoint{{0.25}}, -0.5);
    CHECK(back.theta[0] == doctest::Approx(0.75));
}

TEST_CASE("flow property") {
    const BaseFlowSpec spec{FlowKind::Quasiperiodic, {1.0, g, std::sqrt(2.0)}};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0), ut(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const BasePoint w{{u01(rng), u01(rng), u01(rng)}};
        const double s = ut(rng), t = ut(rng);
        const auto a = advance(spec, w, s + t);
        const auto b = advance(spec, advance(spec, w, s), t);
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = std::abs(a.theta[k] - b.theta[k]);
            CHECK(std::min(d, 1.0 - d) < 1e-12);
            CHECK(a.theta[k] >= 0.0);
            CHECK(a.theta[k] < 1.0);
        }
    }
}

TEST_CASE("wrap_unit stays in [0,1)") {
    CHECK(wrap_unit(-1e-18) < 1.0);
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(3.5) == doctest::Approx(0.5));
}

TEST_CASE("grid points") {
    CHECK(grid_points(BaseFlowSpec::autonomous(), 5).size() == 1);
    const auto per = grid_points(BaseFlowSpec::periodic(1.0), 4);
    REQUIRE(per.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(per[k].theta[0] == doctest::Approx(0.25 * k));
    const auto qp = grid_points(BaseFlowSpec::golden(), 3);
    REQUIRE(qp.size() == 3);
    CHECK(qp[1].theta[0] == doctest::Approx(0.0));
    CHECK(qp[1].theta[1] == doctest::Approx(g));
    CHECK(qp[2].theta[1] == doctest::Approx(2 * g - 1));
    CHECK_THROWS_AS(grid_points(BaseFlowSpec::golden(), 0), DomainError);
}

TEST_CASE("grid points lie on the orbit of the origin") {
    for (const auto& spec : {BaseFlowSpec::periodic(2.5), BaseFlowSpec::golden()}) {
        const auto pts = grid_points(spec, 17);
        const auto times = grid_orbit_times(spec, 17);
        REQUIRE(times.size() == pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const auto q = advance(spec, origin(spec), times[k]);
            for (std::size_t i = 0; i < q.theta.size(); ++i) {
                const double d = std::abs(q.theta[i] - pts[k].theta[i]);
                CHECK(std::min(d, 1.0 - d) < 1e-9);
            }
        }
    }
}

TEST_CASE("ergodic averages") {
    const auto golden = BaseFlowSpec::golden();
    const BasePoint o = origin(golden);
    CHECK(ergodic_average(golden, [](const BasePoint&) { return 0.3; }, o, 123.0) == doctest::Approx(0.3));
    const double c = ergodic_average(
        golden, [](const BasePoint& p) { return std::cos(2 * std::numbers::pi * p.theta[0]); }, o, 1e4);
    CHECK(std::abs(c) < 2e-4);
    const double m = ergodic_average(
        golden, [](const BasePoint& p) { return 0.7 + 0.3 * std::cos(2 * std::numbers::pi * p.theta[1]); }, o, 1e4);
    CHECK(std::abs(m - 0.7) < 2e-4);
    CHECK_THROWS_AS(ergodic_average(golden, [](const BasePoint&) { return 1.0; }, o, 0.0), DomainError);
}

TEST_CASE("averaging error shrinks as the horizon doubles") {
    const auto golden = BaseFlowSpec::golden();
    const BasePoint w{{0.1, 0.37}};
    auto obs = [](const BasePoint& p) { return std::cos(2 * std::numbers::pi * (p.theta[0] + 2 * p.theta[1])); };
    // The worst error over a window of horizons decays like C/T.
    double prev = INFINITY;
    for (double T = 100.0; T <= 1e5; T *= 10.0) {
        double worst = 0.0;
        for (double k = 1.0; k < 2.0; k += 0.25) worst = std::max(worst, std::abs(ergodic_average(golden, obs, w, k * T)));
        CHECK(worst <= prev);
        CHECK(worst * T < 2.0);
        prev = worst;
    }
}

TEST_CASE("frequency validation") {
    CHECK_THROWS_AS((BaseFlowSpec{FlowKind::Periodic, {}}.validate()), ParseError);
    CHECK_THROWS_AS((BaseFlowSpec{FlowKind::Quasiperiodic, {1.0}}.validate()), ParseError);
    CHECK_THROWS_AS((BaseFlowSpec{FlowKind::Quasiperiodic, {1.0, 0.0}}.validate()), ParseError);
    CHECK_THROWS_AS((BaseFlowSpec{FlowKind::Autonomous, {1.0}}.validate()), ParseError);
    CHECK_NOTHROW(BaseFlowSpec::golden().validate());
    CHECK(flow_kind_from_string("periodic") == FlowKind::Periodic);
    CHECK_THROWS_AS(flow_kind_from_string("chaotic"), ParseError);
}
