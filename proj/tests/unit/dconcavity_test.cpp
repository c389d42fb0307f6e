#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "snbif/dconcavity.hpp"
#include "snbif/errors.hpp"
#include "support.hpp"

using namespace snbif;

namespace {
const DcInterval kJ{-1.0, 1.0};
const BasePoint kNone{};
}  // namespace

TEST_CASE("standardized module closed forms") {
    const auto m = RhsModel::cubic(0, 0, 0, -1);
    CHECK(standardized_module(m, kNone, kJ, 0.5) == doctest::Approx(0.01171875).epsilon(1e-12));
    CHECK(standardized_module(RhsModel::cubic(1, -2, 3, 0), kNone, kJ, 0.7) == 0.0);
    CHECK(standardized_module(m, kNone, kJ, 0.0) == 0.0);
    CHECK_THROWS_AS(standardized_module(m, kNone, kJ, 2.5), DomainError);
    CHECK_THROWS_AS(standardized_module(m, kNone, kJ, -0.1), DomainError);
}

TEST_CASE("deadzone module is zero exactly when the flat part is wide enough") {
    for (double w : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5}) {
        const auto m = RhsModel::deadzone(TrigPoly::constant(w));
        for (double eps : {0.1, 0.25, 0.5, 1.0}) {
            const double b = standardized_module(m, kNone, kJ, eps);
            CHECK(b >= 0.0);
            CHECK((b <= kPosTol) == (2 * w >= eps));
            CHECK(b == doctest::Approx(oracle::module_grid_oracle(m, kNone, kJ, eps, 20001)).epsilon(1e-6));
        }
    }
}

TEST_CASE("module is nondecreasing in eps") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto dz = RhsModel::deadzone(testing_support::wave1(0.25, -0.25, {1}));
    const auto cu = RhsModel::cubic(testing_support::wave1(0.0, 0.3, {1}), TrigPoly::constant(0.4),
                                    testing_support::wave1(0.2, 0.5, {1}), testing_support::wave1(-1.0, 0.5, {1}));
    for (const auto* m : {&dz, &cu}) {
        for (int i = 0; i < 200; ++i) {
            const BasePoint w{{u01(rng)}};
            double e1 = 2.0 * u01(rng), e2 = 2.0 * u01(rng);
            if (e1 > e2) std::swap(e1, e2);
            CHECK(standardized_module(*m, w, kJ, e1) <= standardized_module(*m, w, kJ, e2) + 1e-12);
        }
    }
}

TEST_CASE("module of a sum dominates the sum of modules") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto a = RhsModel::cubic(u(rng), u(rng), u(rng), -u01(rng));
        const auto b = RhsModel::cubic(u(rng), u(rng), u(rng), -u01(rng));
        RhsModel sum = a;
        for (int k = 0; k < 4; ++k) sum.coeffs[k].mean += b.coeffs[k].mean;
        const double eps = 0.05 + u01(rng);
        CHECK(standardized_module(sum, kNone, kJ, eps) >=
              standardized_module(a, kNone, kJ, eps) + standardized_module(b, kNone, kJ, eps) - 1e-10);
    }
}

TEST_CASE("module inequality") {
    const auto r = check_module_inequality(RhsModel::cubic(0, 0, 0, -1), kJ, 0.4, 10000);
    CHECK(r.passed);
    CHECK(r.min_slack > 0.0);
    CHECK(r.witness_x.size() == 4);
    CHECK(check_module_inequality(RhsModel::cubic(0.3, 1, -2, 0), kJ, 0.4, 2000).passed);
    CHECK(check_module_inequality(RhsModel::deadzone(TrigPoly::constant(0.5)), kJ, 0.3, 5000).passed);
    CHECK_THROWS_AS(check_module_inequality(RhsModel::cubic(0, 0, 0, -1), kJ, 1.5, 10), DomainError);
}

TEST_CASE("positivity measures") {
    Scenario s = testing_support::cubic(0, 0, 0, -1, Family::Additive, BaseFlowSpec::periodic(1.0));
    s.numerics.birkhoff_T = 100.0;
    CHECK(measure_positive_module(s, kJ, 0.25) == doctest::Approx(1.0));
    s.rhs = RhsModel::cubic(0, 1, 1, 0);
    CHECK(measure_positive_module(s, kJ, 0.25) == 0.0);

    Scenario dz = testing_support::deadzone_sin2();
    dz.numerics.birkhoff_T = 1e4;
    const double expect = 2.0 / std::numbers::pi * std::asin(std::sqrt(0.25));
    CHECK(std::abs(measure_positive_module(dz, kJ, 0.25) - expect) < 0.02);
}

TEST_CASE("strict d-concavity classification") {
    SUBCASE("cubic with a negative third derivative") {
        Scenario s = testing_support::cubic(0, 0, 0, -1, Family::Additive, BaseFlowSpec::golden());
        s.rhs.coeffs[2] = testing_support::wave1(0.0, 1.0, {1, 0});
        s.numerics.birkhoff_T = 200.0;
        const auto r = classify_sdc(s, kJ, {0.1, 0.5, 1.0});
        CHECK(r.classification == SdcClass::SDC);
        for (double m : r.measures) CHECK(m == doctest::Approx(1.0));
        CHECK(r.evidence == "numerical evidence");
    }
    SUBCASE("quadratic") {
        Scenario s = testing_support::cubic(0, 1, -1, 0);
        s.numerics.birkhoff_T = 50.0;
        const auto r = classify_sdc(s, kJ, {0.1, 0.5});
        CHECK(r.classification == SdcClass::DC_only);
        for (double m : r.measures) CHECK(m == 0.0);
    }
    SUBCASE("deadzone: positive but shrinking") {
        Scenario s = testing_support::deadzone_sin2();
        s.numerics.birkhoff_T = 2000.0;
        const auto r = classify_sdc(s, kJ, {0.05, 0.1, 0.25});
        REQUIRE(r.measures.size() == 3);
        const double expect[] = {0.1436, 0.2048, 0.3333};
        for (int i = 0; i < 3; ++i) CHECK(std::abs(r.measures[i] - expect[i]) < 0.02);
        CHECK(r.measures[0] <= r.measures[1]);
        CHECK(r.measures[1] <= r.measures[2]);
        CHECK(r.classification == SdcClass::SDC);
        CHECK_FALSE(r.warnings.empty());
        CHECK(r.horizon == 2000.0);
        CHECK(r.pos_tol == kPosTol);
    }
    SUBCASE("bad grids") {
        const Scenario s = testing_support::deadzone_sin2();
        CHECK_THROWS_AS(classify_sdc(s, kJ, {}), DomainError);
        CHECK_THROWS_AS(classify_sdc(s, kJ, {0.5, 0.1}), DomainError);
        CHECK_THROWS_AS(classify_sdc(s, kJ, {1.5}), DomainError);
    }
    SUBCASE("not d-concave") {
        Scenario s = testing_support::cubic(0, 0, 0, 1);
        s.numerics.birkhoff_T = 50.0;
        CHECK(classify_sdc(s, kJ, {0.5}).classification == SdcClass::NotDC);
    }
}
