#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snbif/model.hpp"
#include "snbif/scenario.hpp"

namespace snbif {

struct DcInterval {
    double lo = -1.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
};

/// Positivity threshold separating a structurally zero module from roundoff.
inline constexpr double kPosTol = 1e-12;

/// b_{J,eps}(omega) = eps/(4 l(J)^2) * min over x in J_eps of
/// 2 f_x(x) - f_x(x - eps/2) - f_x(x + eps/2), with J_eps = [lo + eps/2, hi - eps/2].
/// Throws DomainError unless 0 <= eps <= l(J).
double standardized_module(const RhsModel& m, const BasePoint& omega, const DcInterval& J, double eps);

/// Same, from coefficient values already evaluated at omega.
double standardized_module(RhsShape shape, const CoefficientValues& cv, const DcInterval& J, double eps);

struct ModuleCheck {
    bool passed = true;
    double min_slack = 0.0;  ///< min of f[x1,x0,x2] - f[x1,x0,x3] - b over the trials
    BasePoint witness_omega;
    std::vector<double> witness_x;  ///< x0, x1, x2, x3 at the minimum
};

/// Random test of f[x1,x0,x2] >= f[x1,x0,x3] + b_{J,eps} for x_i in J with
/// x2 - x1 >= eps, x3 - x2 >= eps. Needs 0 < 2 eps <= l(J) and a (DC) model.
ModuleCheck check_module_inequality(const RhsModel& m, const DcInterval& J, double eps, int trials,
                                    std::uint64_t seed = 0x5eed);

/// Fraction of [0, birkhoff_T] during which b_{J,eps}(omega0 . s) > kPosTol,
/// from the origin. Positivity-set boundaries are located by bisection, so the
/// result is the Lebesgue time up to the sampling resolution of the orbit.
double measure_positive_module(const Scenario& s, const DcInterval& J, double eps);

enum class SdcClass { NotDC, DC_only, SDC, SDC_m_evidence };

std::string to_string(SdcClass c);

struct SdcReport {
    DcInterval interval;
    std::vector<double> eps_grid;
    std::vector<double> measures;
    SdcClass classification = SdcClass::DC_only;
    double horizon = 0.0;
    double pos_tol = kPosTol;
    double sample_step = 0.0;
    std::string evidence = "numerical evidence";
    std::vector<std::string> warnings;
    std::string note = "uniquely ergodic base: the measure-strict and strict classes coincide";
};

/// Throws DomainError on an empty, unsorted or out-of-range eps grid.
SdcReport classify_sdc(const Scenario& s, const DcInterval& J, const std::vector<double>& eps_grid);

}  // namespace snbif
