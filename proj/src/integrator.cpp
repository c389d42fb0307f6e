#include "snbif/integrator.hpp"

#include <algorithm>
#include <limits>

#include "snbif/equilibria.hpp"
#include "snbif/errors.hpp"

namespace snbif {

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Ok: return "ok";
        case SolveStatus::BlowupDetected: return "blowup";
        case SolveStatus::StepFloorHit: return "step-floor";
    }
    return "?";
}

namespace {

SolveStatus status_of(rk::Outcome o) {
    switch (o) {
        case rk::Outcome::Ok: return SolveStatus::Ok;
        case rk::Outcome::Aborted: return SolveStatus::BlowupDetected;
        default: return SolveStatus::StepFloorHit;
    }
}

}  // namespace

FiberField::FiberField(const Scenario& s, double lambda, const BasePoint& omega)
    : coeffs_(s.rhs, s.base, omega),
      shape_(s.rhs.shape),
      linear_(s.family == Family::Linear),
      lambda_(lambda),
      radius_(coercive_radius(s, lambda).value_or(std::numeric_limits<double>::infinity())),
      control_(s.numerics.control()) {}

FiberField::Path FiberField::flow(double x0, double s0, double s1, double h_warm) const {
    // Time runs from 0 so the step floor is relative to elapsed time, not to s0.
    auto rhs = [this, s0](double tau, const rk::State<2>& y, rk::State<2>& dy) {
        const Derivatives d = at(s0 + tau, y[0]);
        dy[0] = d.f;
        dy[1] = d.fx;
    };
    const double bound = escape_bound(x0);
    auto accept = [bound](double, const rk::State<2>& y) { return std::abs(y[0]) <= bound; };
    const auto r = rk::integrate<2>(rhs, 0.0, rk::State<2>{x0, 0.0}, s1 - s0, control_, accept, h_warm);
    return Path{s0 + r.t, r.y[0], r.y[1], status_of(r.outcome), r.last_h};
}

OdeSolution FiberField::flow_variational(double x0, double s0, double s1) const {
    auto rhs = [this, s0](double tau, const rk::State<5>& y, rk::State<5>& dy) {
        const Derivatives d = at(s0 + tau, y[0]);
        const double v1 = y[1], v2 = y[2], v3 = y[3];
        dy[0] = d.f;
        dy[1] = d.fx * v1;
        dy[2] = d.fxx * v1 * v1 + d.fx * v2;
        dy[3] = d.fxxx * v1 * v1 * v1 + 3.0 * d.fxx * v1 * v2 + d.fx * v3;
        dy[4] = d.fx;
    };
    const double bound = escape_bound(x0);
    auto accept = [bound](double, const rk::State<5>& y) { return std::abs(y[0]) <= bound; };
    const auto r = rk::integrate<5>(rhs, 0.0, rk::State<5>{x0, 1.0, 0.0, 0.0, 0.0}, s1 - s0, control_, accept);
    OdeSolution out;
    out.t_end = r.t;
    out.x_end = r.y[0];
    out.ux = r.y[1];
    out.uxx = r.y[2];
    out.uxxx = r.y[3];
    out.fx_integral = r.y[4];
    out.status = status_of(r.outcome);
    return out;
}

OdeSolution solve(const Scenario& s, double lambda, const BasePoint& omega, double x0, double t,
                  bool with_variationals) {
    const FiberField field(s, lambda, omega);
    if (with_variationals) return field.flow_variational(x0, 0.0, t);
    const auto p = field.flow(x0, 0.0, t);
    OdeSolution out;
    out.t_end = p.s;
    out.x_end = p.x;
    out.fx_integral = p.fx_integral;
    out.status = p.status;
    return out;
}

double schwarzian(const Scenario& s, double lambda, const BasePoint& omega, double x0, double t) {
    if (!(t >= 0.0)) throw DomainError("schwarzian needs t >= 0");
    if (t == 0.0) return 0.0;
    // The two terms cancel to leading order, so the variationals get tighter tolerances.
    Scenario tight = s;
    tight.numerics.rtol = std::min(s.numerics.rtol, 1e-12);
    tight.numerics.atol = std::min(s.numerics.atol, 1e-15);
    const OdeSolution sol = solve(tight, lambda, omega, x0, t, true);
    if (sol.status != SolveStatus::Ok)
        throw IntegrationFailure("fiber solve stopped early (" + to_string(sol.status) + ")");
    const double a = *sol.uxx / *sol.ux;
    return *sol.uxxx / *sol.ux - 1.5 * a * a;
}

}  // namespace snbif
