#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "snbif/rk45.hpp"

namespace snbif {

enum class FlowKind { Autonomous, Periodic, Quasiperiodic };

std::string to_string(FlowKind kind);
FlowKind flow_kind_from_string(const std::string& s);

/// Linear rotation on the d-torus, theta -> theta + nu t (mod 1).
///
/// Autonomous flows have d = 0; periodic flows d = 1; quasiperiodic flows d >= 2
/// with rationally independent frequencies (asserted by the caller, not checked).
struct BaseFlowSpec {
    FlowKind kind = FlowKind::Autonomous;
    std::vector<double> frequencies;

    std::size_t dim() const { return frequencies.size(); }

    /// Throws ParseError when the frequency count or values do not fit the kind.
    void validate() const;

    static BaseFlowSpec autonomous() { return {}; }
    static BaseFlowSpec periodic(double nu) { return {FlowKind::Periodic, {nu}}; }
    /// Golden-mean forcing (1, (sqrt(5)-1)/2).
    static BaseFlowSpec golden();

    bool operator==(const BaseFlowSpec&) const = default;
};

/// A point on the torus; every coordinate lies in [0,1).
struct BasePoint {
    std::vector<double> theta;

    bool operator==(const BasePoint&) const = default;
};

/// Reduces v into [0,1).
double wrap_unit(double v);

BasePoint origin(const BaseFlowSpec& spec);

/// omega . t
BasePoint advance(const BaseFlowSpec& spec, const BasePoint& omega, double t);

/// Deterministic low-discrepancy sample of the torus.
///
/// d = 0: the single point; d = 1: {k/n}; d >= 2: the Kronecker sequence
/// {k nu/nu_1 mod 1}. For d >= 1 every sample lies on the orbit of the origin,
/// see grid_orbit_times().
std::vector<BasePoint> grid_points(const BaseFlowSpec& spec, std::size_t n);

/// Times t_k with advance(origin, t_k) == grid_points(spec, n)[k].
std::vector<double> grid_orbit_times(const BaseFlowSpec& spec, std::size_t n);

using Observable = std::function<double(const BasePoint&)>;

/// (1/T) * integral_0^T g(omega0 . s) ds, computed with the shared RK quadrature.
double ergodic_average(const BaseFlowSpec& spec, const Observable& g, const BasePoint& omega0,
                       double T, const rk::Control& control = {});

/// The same average at several ascending horizons, from one pass along the orbit.
std::vector<double> ergodic_averages(const BaseFlowSpec& spec, const Observable& g, const BasePoint& omega0,
                                     const std::vector<double>& horizons, const rk::Control& control = {});

}  // namespace snbif
