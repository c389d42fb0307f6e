#pragma once

// Dormand-Prince 5(4) pair with a PI step-size controller, for small fixed-size
// states. Shared by the fiber integrator and by Birkhoff quadrature so that both
// run on the same time grids and tolerances.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace snbif::rk {

template <std::size_t N>
using State = std::array<double, N>;

struct Control {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_floor_rel = 1e-14;  ///< step floor: h < h_floor_rel * max(1,|t|)
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 500'000'000;
};

enum class Outcome { Ok, Aborted, StepFloorHit, StepBudgetExhausted };

template <std::size_t N>
struct Result {
    double t = 0.0;
    State<N> y{};
    Outcome outcome = Outcome::Ok;
    std::size_t steps = 0;
    double last_h = 0.0;  ///< last accepted step size (signed), reusable as a warm start
};

namespace detail {

// Dormand & Prince (1980) coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1, const Control& c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = c.atol + c.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(N));
}

template <std::size_t N, class Rhs>
double initial_step(Rhs& rhs, double t0, const State<N>& y0, const State<N>& f0, double dir,
                    const Control& c) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = c.atol + c.rtol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, c.h_max);
    State<N> y1{};
    for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
    State<N> f1{};
    rhs(t0 + dir * h0, y1, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = c.atol + c.rtol * std::abs(y0[i]);
        const double r = (f1[i] - f0[i]) / sc;
        d2 += r * r;
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, c.h_max});
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (either direction).
///
/// `rhs(t, y, dydt)` fills dydt. `accept(t, y)` is called after every accepted
/// step and returns false to abort (blow-up detection). `h_start` (> 0) warm
/// starts the step size; 0 lets the integrator choose.
template <std::size_t N, class Rhs, class Accept>
Result<N> integrate(Rhs&& rhs, double t0, State<N> y0, double t1, const Control& c,
                    Accept&& accept, double h_start = 0.0) {
    using namespace detail;
    Result<N> res;
    res.t = t0;
    res.y = y0;
    if (t1 == t0) return res;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    State<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{}, err{};
    rhs(t0, y0, k1);
    double h = h_start > 0.0 ? std::min(h_start, c.h_max) : initial_step<N>(rhs, t0, y0, k1, dir, c);
    // The heuristic can undershoot when a component sits at zero; start clear of the floor.
    h = std::max(h, 1e3 * c.h_floor_rel * std::max(1.0, std::abs(t0)));
    double t = t0;
    State<N> y = y0;
    double err_old = 1e-4;
    bool rejected = false;
    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;
    constexpr double beta = 0.04, alpha = 0.2 - 0.75 * beta;

    while ((t1 - t) * dir > 0.0) {
        if (res.steps >= c.max_steps) {
            res.outcome = Outcome::StepBudgetExhausted;
            break;
        }
        bool last = false;
        if ((t + h * dir - t1) * dir >= 0.0) {
            h = std::abs(t1 - t);
            last = true;
        }
        if (!last && h < c.h_floor_rel * std::max(1.0, std::abs(t))) {
            res.outcome = Outcome::StepFloorHit;
            break;
        }
        const double hs = h * dir;
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                   a65 * k5[i]);
        const double t_new = last ? t1 : t + hs;
        rhs(t_new, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                   a76 * k6[i]);
        rhs(t_new, ynew, k7);
        for (std::size_t i = 0; i < N; ++i)
            err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
        const double en = error_norm<N>(err, y, ynew, c);
        ++res.steps;

        if (!std::isfinite(en)) {
            h *= 0.25;
            rejected = true;
            continue;
        }
        if (en <= 1.0) {
            double fac = en == 0.0 ? fac_max
                                   : safety * std::pow(en, -alpha) * std::pow(err_old, beta);
            fac = std::clamp(fac, fac_min, fac_max);
            if (rejected) fac = std::min(fac, 1.0);
            err_old = std::max(en, 1e-4);
            res.last_h = hs;
            t = t_new;
            y = ynew;
            k1 = k7;  // FSAL
            rejected = false;
            if (!accept(t, y)) {
                res.outcome = Outcome::Aborted;
                break;
            }
            if (!last) h = std::min(h * fac, c.h_max);
        } else {
            const double fac = std::max(fac_min, safety * std::pow(en, -alpha));
            h *= fac;
            rejected = true;
        }
    }
    res.t = t;
    res.y = y;
    return res;
}

template <std::size_t N, class Rhs>
Result<N> integrate(Rhs&& rhs, double t0, State<N> y0, double t1, const Control& c) {
    return integrate<N>(std::forward<Rhs>(rhs), t0, y0, t1, c,
                        [](double, const State<N>&) { return true; });
}

}  // namespace snbif::rk
