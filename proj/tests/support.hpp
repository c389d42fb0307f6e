#pragma once

#include <string>
#include <vector>

#include "snbif/scenario.hpp"

namespace testing_support {

inline snbif::Scenario cubic(double c0, double c1, double c2, double c3, snbif::Family family = snbif::Family::Additive,
                             snbif::BaseFlowSpec base = snbif::BaseFlowSpec::autonomous()) {
    snbif::Scenario s;
    s.base = std::move(base);
    s.rhs = snbif::RhsModel::cubic(c0, c1, c2, c3);
    s.family = family;
    return s;
}

inline snbif::TrigPoly wave1(double mean, double amplitude, std::vector<int> wave = {1}, double phase = 0.0) {
    snbif::TrigPoly p{mean, {}};
    p.harmonics.push_back({std::move(wave), amplitude, phase});
    return p;
}

// x' = -x^3 + a2(theta) x^2 + lambda x on the golden torus.
inline snbif::Scenario showcase(snbif::TrigPoly a2) {
    snbif::Scenario s;
    s.base = snbif::BaseFlowSpec::golden();
    s.rhs = snbif::RhsModel::cubic(snbif::TrigPoly::constant(0.0), snbif::TrigPoly::constant(0.0), std::move(a2),
                                   snbif::TrigPoly::constant(-1.0));
    s.family = snbif::Family::Linear;
    s.sweep = {-0.5, 0.5, 40};
    s.numerics.grid_n = 64;
    s.numerics.birkhoff_T = 2000.0;
    return s;
}

// Halfwidth sin^2(pi theta) / 2 = 1/4 - cos(2 pi theta) / 4 on the unit-frequency circle.
inline snbif::Scenario deadzone_sin2() {
    snbif::Scenario s;
    s.base = snbif::BaseFlowSpec::periodic(1.0);
    s.rhs = snbif::RhsModel::deadzone(wave1(0.25, -0.25));
    return s;
}

#ifndef SNBIF_SCENARIO_DIR
#define SNBIF_SCENARIO_DIR "scenarios"
#endif

inline std::string scenario_path(const std::string& name) { return std::string(SNBIF_SCENARIO_DIR) + "/" + name; }

}  // namespace testing_support
