#include "snbif/base_flow.hpp"

#include <cmath>

#include "snbif/errors.hpp"

namespace snbif {

std::string to_string(FlowKind kind) {
    switch (kind) {
        case FlowKind::Autonomous: return "autonomous";
        case FlowKind::Periodic: return "periodic";
        case FlowKind::Quasiperiodic: return "quasiperiodic";
    }
    return "?";
}

FlowKind flow_kind_from_string(const std::string& s) {
    if (s == "autonomous") return FlowKind::Autonomous;
    if (s == "periodic") return FlowKind::Periodic;
    if (s == "quasiperiodic") return FlowKind::Quasiperiodic;
    throw ParseError("unknown base kind \"" + s + "\"");
}

void BaseFlowSpec::validate() const {
    switch (kind) {
        case FlowKind::Autonomous:
            if (!frequencies.empty())
                throw ParseError("autonomous base takes no frequencies");
            break;
        case FlowKind::Periodic:
            if (frequencies.size() != 1)
                throw ParseError("periodic base needs exactly one frequency");
            break;
        case FlowKind::Quasiperiodic:
            if (frequencies.size() < 2)
                throw ParseError("quasiperiodic base needs at least two frequencies");
            break;
    }
    for (double nu : frequencies) {
        if (!std::isfinite(nu) || nu == 0.0) throw ParseError("frequencies must be finite and nonzero");
    }
}

BaseFlowSpec BaseFlowSpec::golden() {
    return {FlowKind::Quasiperiodic, {1.0, (std::sqrt(5.0) - 1.0) / 2.0}};
}

double wrap_unit(double v) {
    double r = v - std::floor(v);
    // floor can leave r == 1.0 for tiny negative v
    if (r >= 1.0) r = 0.0;
    return r;
}

BasePoint origin(const BaseFlowSpec& spec) { return BasePoint{std::vector<double>(spec.dim(), 0.0)}; }

BasePoint advance(const BaseFlowSpec& spec, const BasePoint& omega, double t) {
    BasePoint out{omega.theta};
    for (std::size_t i = 0; i < spec.dim(); ++i) out.theta[i] = wrap_unit(omega.theta[i] + spec.frequencies[i] * t);
    return out;
}

std::vector<BasePoint> grid_points(const BaseFlowSpec& spec, std::size_t n) {
    if (n == 0) throw DomainError("grid size must be positive");
    const std::size_t d = spec.dim();
    if (d == 0) return {BasePoint{}};
    std::vector<BasePoint> pts(n, BasePoint{std::vector<double>(d, 0.0)});
    if (d == 1) {
        for (std::size_t k = 0; k < n; ++k) pts[k].theta[0] = static_cast<double>(k) / static_cast<double>(n);
        return pts;
    }
    const double nu1 = spec.frequencies[0];
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < d; ++i)
            pts[k].theta[i] = wrap_unit(static_cast<double>(k) * (spec.frequencies[i] / nu1));
    }
    return pts;
}

std::vector<double> grid_orbit_times(const BaseFlowSpec& spec, std::size_t n) {
    if (n == 0) throw DomainError("grid size must be positive");
    const std::size_t d = spec.dim();
    if (d == 0) return {0.0};
    const double step = d == 1 ? 1.0 / (static_cast<double>(n) * spec.frequencies[0]) : 1.0 / spec.frequencies[0];
    std::vector<double> times(n);
    for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k) * step;
    return times;
}

std::vector<double> ergodic_averages(const BaseFlowSpec& spec, const Observable& g, const BasePoint& omega0,
                                     const std::vector<double>& horizons, const rk::Control& control) {
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        if (!(horizons[k] > 0.0)) throw DomainError("averaging horizon must be positive");
        if (k > 0 && !(horizons[k] >= horizons[k - 1])) throw DomainError("averaging horizons must be ascending");
    }
    BasePoint scratch{omega0.theta};
    auto rhs = [&](double s, const rk::State<1>&, rk::State<1>& dy) {
        for (std::size_t i = 0; i < spec.dim(); ++i)
            scratch.theta[i] = wrap_unit(omega0.theta[i] + spec.frequencies[i] * s);
        dy[0] = g(scratch);
    };
    // Oscillations are resolved by the error control; capping h at a quarter of
    // the fastest base period keeps the first step from stepping over them.
    rk::Control c = control;
    double nu_max = 0.0;
    for (double nu : spec.frequencies) nu_max = std::max(nu_max, std::abs(nu));
    if (nu_max > 0.0) c.h_max = std::min(c.h_max, 0.25 / nu_max);

    std::vector<double> out;
    out.reserve(horizons.size());
    rk::State<1> y{0.0};
    double t = 0.0, h = 0.0;
    for (double T : horizons) {
        const auto res = rk::integrate<1>(rhs, t, y, T, c, [](double, const rk::State<1>&) { return true; }, h);
        y = res.y;
        t = T;
        if (res.last_h != 0.0) h = std::abs(res.last_h);
        out.push_back(y[0] / T);
    }
    return out;
}

double ergodic_average(const BaseFlowSpec& spec, const Observable& g, const BasePoint& omega0, double T,
                       const rk::Control& control) {
    return ergodic_averages(spec, g, omega0, {T}, control).front();
}

}  // namespace snbif
