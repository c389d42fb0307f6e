#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "snbif/model.hpp"
#include "snbif/rk45.hpp"
#include "snbif/scenario.hpp"

namespace snbif {

enum class SolveStatus { Ok, BlowupDetected, StepFloorHit };

std::string to_string(SolveStatus status);

struct OdeSolution {
    double t_end = 0.0;
    double x_end = 0.0;
    std::optional<double> ux;
    std::optional<double> uxx;
    std::optional<double> uxxx;
    double fx_integral = 0.0;  ///< integral of F_x along the solution
    SolveStatus status = SolveStatus::Ok;
};

/// The effective field F = f + lambda (Additive) or f + lambda x (Linear)
/// frozen along the base orbit s -> omega . s.
class FiberField {
public:
    FiberField(const Scenario& s, double lambda, const BasePoint& omega);

    Derivatives at(double s, double x) const {
        Derivatives d = evaluate(shape_, coeffs_.at(s), x);
        if (linear_) {
            d.f += lambda_ * x;
            d.fx += lambda_;
        } else {
            d.f += lambda_;
        }
        return d;
    }

    double rate(double s, double x) const { return at(s, x).f; }

    double lambda() const { return lambda_; }
    /// R with F(., x) > 0 for x <= -R and F(., x) < 0 for x >= R.
    double radius() const { return radius_; }
    /// |x| beyond this counts as escape to infinity.
    double escape_bound(double x0) const { return 10.0 * (1.0 + std::max(radius_, std::abs(x0))); }
    const rk::Control& control() const { return control_; }

    struct Path {
        double s = 0.0;
        double x = 0.0;
        double fx_integral = 0.0;
        SolveStatus status = SolveStatus::Ok;
        double last_h = 0.0;
    };

    /// Solution of x' = F(omega . s, x), x(s0) = x0, evaluated at s1 (s1 < s0 allowed).
    Path flow(double x0, double s0, double s1, double h_warm = 0.0) const;

    /// Same, co-integrating the first three variational equations.
    OdeSolution flow_variational(double x0, double s0, double s1) const;

    /// Integrates N fibers side by side. `stop(s, xs)` returns true to end early.
    template <std::size_t N, class Stop>
    rk::Result<N> flow_many(const rk::State<N>& x0, double s0, double s1, Stop&& stop) const {
        auto rhs = [this, s0](double tau, const rk::State<N>& y, rk::State<N>& dy) {
            const CoefficientValues cv = coeffs_.at(s0 + tau);
            for (std::size_t i = 0; i < N; ++i) {
                const double f = evaluate(shape_, cv, y[i]).f;
                dy[i] = f + (linear_ ? lambda_ * y[i] : lambda_);
            }
        };
        double bound = 0.0;
        for (double v : x0) bound = std::max(bound, escape_bound(v));
        auto accept = [&](double tau, const rk::State<N>& y) {
            for (double v : y)
                if (!(std::abs(v) <= bound)) return false;
            return !stop(s0 + tau, y);
        };
        auto r = rk::integrate<N>(rhs, 0.0, x0, s1 - s0, control_, accept);
        r.t += s0;
        return r;
    }

private:
    OrbitCoefficients coeffs_;
    RhsShape shape_;
    bool linear_;
    double lambda_;
    double radius_;
    rk::Control control_;
};

/// Fiber solution u(t, omega, x0) with optional variationals.
OdeSolution solve(const Scenario& s, double lambda, const BasePoint& omega, double x0, double t,
                  bool with_variationals);

/// Schwarzian derivative S_x u(t, omega, x0) = u_xxx/u_x - (3/2)(u_xx/u_x)^2 for t >= 0.
/// Throws IntegrationFailure if the solve does not reach t.
double schwarzian(const Scenario& s, double lambda, const BasePoint& omega, double x0, double t);

}  // namespace snbif
