#include "snbif/model.hpp"

#include <cmath>
#include <numbers>

#include "snbif/errors.hpp"

namespace snbif {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(const std::vector<int>& wave, std::span<const double> v) {
    double acc = 0.0;
    const std::size_t n = std::min(wave.size(), v.size());
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(wave[i]) * v[i];
    return acc;
}

double sum_abs_amplitudes(const TrigPoly& p) {
    double s = 0.0;
    for (const auto& h : p.harmonics) s += std::abs(h.amplitude);
    return s;
}

}  // namespace

double TrigPoly::operator()(std::span<const double> theta) const {
    double v = mean;
    for (const auto& h : harmonics) {
        // reduce the phase argument mod 1 before scaling, keeps large-time orbits accurate
        const double arg = dot(h.wave, theta);
        v += h.amplitude * std::cos(kTwoPi * (arg - std::floor(arg)) + h.phase);
    }
    return v;
}

double TrigPoly::sup_bound() const { return std::abs(mean) + sum_abs_amplitudes(*this); }
double TrigPoly::upper_bound() const { return mean + sum_abs_amplitudes(*this); }
double TrigPoly::lower_bound() const { return mean - sum_abs_amplitudes(*this); }

bool TrigPoly::is_constant() const {
    for (const auto& h : harmonics)
        if (h.amplitude != 0.0) return false;
    return true;
}

std::string to_string(RhsShape shape) { return shape == RhsShape::CubicPoly ? "cubic" : "deadzone"; }

RhsModel RhsModel::cubic(TrigPoly c0, TrigPoly c1, TrigPoly c2, TrigPoly c3) {
    RhsModel m;
    m.shape = RhsShape::CubicPoly;
    m.coeffs = {std::move(c0), std::move(c1), std::move(c2), std::move(c3)};
    return m;
}

RhsModel RhsModel::cubic(double c0, double c1, double c2, double c3) {
    return cubic(TrigPoly::constant(c0), TrigPoly::constant(c1), TrigPoly::constant(c2), TrigPoly::constant(c3));
}

RhsModel RhsModel::deadzone(TrigPoly w) {
    RhsModel m;
    m.shape = RhsShape::DeadzoneCubic;
    m.halfwidth = std::move(w);
    return m;
}

std::size_t RhsModel::wave_dim() const {
    std::size_t d = 0;
    auto scan = [&d](const TrigPoly& p) {
        for (const auto& h : p.harmonics) d = std::max(d, h.wave.size());
    };
    for (const auto& c : coeffs) scan(c);
    scan(halfwidth);
    return d;
}

CoefficientValues coefficients_at(const RhsModel& m, std::span<const double> theta) {
    CoefficientValues cv;
    if (m.shape == RhsShape::CubicPoly) {
        for (std::size_t k = 0; k < 4; ++k) cv.c[k] = m.coeffs[k](theta);
    } else {
        cv.w = m.halfwidth(theta);
    }
    return cv;
}

Derivatives evaluate(RhsShape shape, const CoefficientValues& cv, double x) {
    Derivatives d;
    if (shape == RhsShape::CubicPoly) {
        const auto& c = cv.c;
        d.f = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
        d.fx = (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
        d.fxx = 6.0 * c[3] * x + 2.0 * c[2];
        d.fxxx = 6.0 * c[3];
        return d;
    }
    d.piecewise = true;
    const double w = cv.w;
    if (x > w) {
        const double y = x - w;
        d.f = -y * y * y;
        d.fx = -3.0 * y * y;
        d.fxx = -6.0 * y;
        d.fxxx = -6.0;
    } else if (x < -w) {
        const double y = x + w;
        d.f = -y * y * y;
        d.fx = -3.0 * y * y;
        d.fxx = -6.0 * y;
        d.fxxx = -6.0;
    }
    return d;
}

Derivatives eval_derivatives(const RhsModel& m, const BasePoint& omega, double x) {
    return evaluate(m.shape, coefficients_at(m, omega.theta), x);
}

double divided_difference(const RhsModel& m, const BasePoint& omega, std::span<const double> xs) {
    if (xs.size() != 2 && xs.size() != 3) throw DomainError("divided differences take 2 or 3 abscissae");
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j]) throw DomainError("distinct abscissae required");
    const auto cv = coefficients_at(m, omega.theta);
    auto f = [&](double x) { return evaluate(m.shape, cv, x).f; };
    auto first = [&](double a, double b) { return (f(b) - f(a)) / (b - a); };
    if (xs.size() == 2) return first(xs[0], xs[1]);
    return (first(xs[1], xs[2]) - first(xs[0], xs[1])) / (xs[2] - xs[0]);
}

OrbitCoefficients::OrbitCoefficients(const RhsModel& m, const BaseFlowSpec& spec, const BasePoint& theta0)
    : shape_(m.shape) {
    auto bind = [&](const TrigPoly& p, int slot) {
        if (slot < 4)
            base_.c[static_cast<std::size_t>(slot)] = p.mean;
        else
            base_.w = p.mean;
        for (const auto& h : p.harmonics) {
            if (h.amplitude == 0.0) continue;
            terms_.push_back(Term{slot, h.amplitude, h.phase, dot(h.wave, theta0.theta),
                                  dot(h.wave, spec.frequencies)});
        }
    };
    if (m.shape == RhsShape::CubicPoly) {
        for (int k = 0; k < 4; ++k) bind(m.coeffs[static_cast<std::size_t>(k)], k);
    } else {
        bind(m.halfwidth, 4);
    }
}

CoefficientValues OrbitCoefficients::at(double s) const {
    CoefficientValues cv = base_;
    for (const auto& t : terms_) {
        const double arg = t.p0 + t.q * s;
        const double v = t.amplitude * std::cos(kTwoPi * (arg - std::floor(arg)) + t.phase);
        if (t.slot < 4)
            cv.c[static_cast<std::size_t>(t.slot)] += v;
        else
            cv.w += v;
    }
    return cv;
}

}  // namespace snbif
