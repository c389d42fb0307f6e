#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "snbif/base_flow.hpp"

namespace snbif {

struct Harmonic {
    std::vector<int> wave;
    double amplitude = 0.0;
    double phase = 0.0;  ///< radians

    bool operator==(const Harmonic&) const = default;
};

/// c(theta) = mean + sum amplitude * cos(2 pi <wave, theta> + phase).
struct TrigPoly {
    double mean = 0.0;
    std::vector<Harmonic> harmonics;

    static TrigPoly constant(double c) { return TrigPoly{c, {}}; }

    double operator()(std::span<const double> theta) const;
    double operator()(const BasePoint& p) const { return (*this)(std::span<const double>(p.theta)); }

    /// |mean| + sum |amplitude|, an upper bound of sup |c|.
    double sup_bound() const;
    /// mean + sum |amplitude| >= sup c.
    double upper_bound() const;
    /// mean - sum |amplitude| <= inf c.
    double lower_bound() const;
    bool is_constant() const;
    bool is_zero() const { return mean == 0.0 && is_constant(); }

    bool operator==(const TrigPoly&) const = default;
};

enum class RhsShape { CubicPoly, DeadzoneCubic };

std::string to_string(RhsShape shape);

/// f(omega, x): either sum_k c_k(omega) x^k (k <= 3) or the deadzone cubic
/// -(x - w)^3 for x > w, 0 on [-w, w], -(x + w)^3 for x < -w.
struct RhsModel {
    RhsShape shape = RhsShape::CubicPoly;
    std::array<TrigPoly, 4> coeffs{};  ///< c0..c3, CubicPoly only
    TrigPoly halfwidth{};              ///< w, DeadzoneCubic only

    static RhsModel cubic(TrigPoly c0, TrigPoly c1, TrigPoly c2, TrigPoly c3);
    /// Constant-coefficient cubic c0 + c1 x + c2 x^2 + c3 x^3.
    static RhsModel cubic(double c0, double c1, double c2, double c3);
    static RhsModel deadzone(TrigPoly w);

    /// Largest wave-vector length used by any coefficient.
    std::size_t wave_dim() const;

    bool operator==(const RhsModel&) const = default;
};

struct Derivatives {
    double f = 0.0;
    double fx = 0.0;
    double fxx = 0.0;
    double fxxx = 0.0;
    bool piecewise = false;  ///< fxxx is a one-sided value (deadzone kinks)
};

/// Coefficient values frozen at one base point.
struct CoefficientValues {
    std::array<double, 4> c{};
    double w = 0.0;
};

CoefficientValues coefficients_at(const RhsModel& m, std::span<const double> theta);

/// Derivatives of f at x given the coefficient values at some base point.
Derivatives evaluate(RhsShape shape, const CoefficientValues& cv, double x);

/// (f, f_x, f_xx, f_xxx) at (omega, x).
Derivatives eval_derivatives(const RhsModel& m, const BasePoint& omega, double x);

/// First- (2 points) or second-order (3 points) divided difference of f(omega, .).
double divided_difference(const RhsModel& m, const BasePoint& omega, std::span<const double> xs);

/// Trig-poly coefficients pre-bound to the orbit theta(s) = theta0 + nu s.
/// Evaluating at time s costs one cosine per harmonic and no allocation.
class OrbitCoefficients {
public:
    OrbitCoefficients(const RhsModel& m, const BaseFlowSpec& spec, const BasePoint& theta0);

    CoefficientValues at(double s) const;
    RhsShape shape() const { return shape_; }

private:
    struct Term {
        int slot;  ///< 0..3 cubic coefficient, 4 halfwidth
        double amplitude;
        double phase;
        double p0;  ///< <wave, theta0>
        double q;   ///< <wave, nu>
    };
    RhsShape shape_;
    CoefficientValues base_{};
    std::vector<Term> terms_;
};

}  // namespace snbif
