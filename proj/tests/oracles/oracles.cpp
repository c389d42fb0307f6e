#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

namespace {

double bisect(const AutonomousCubic& p, double a, double b) {
    double fa = p(a);
    if (fa == 0.0) return a;
    if (p(b) == 0.0) return b;
    while (b - a > 1e-12) {
        const double m = 0.5 * (a + b);
        const double fm = p(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double trig(const snbif::TrigPoly& p, const std::vector<double>& theta) {
    double v = p.mean;
    for (const auto& h : p.harmonics) {
        double arg = 0.0;
        for (std::size_t i = 0; i < h.wave.size() && i < theta.size(); ++i) arg += h.wave[i] * theta[i];
        v += h.amplitude * std::cos(2.0 * std::numbers::pi * arg + h.phase);
    }
    return v;
}

}  // namespace

RootCensus root_census(const AutonomousCubic& p) {
    // Critical points split the line into monotone pieces, each holding at most one root.
    std::vector<double> cuts;
    const double a = 3.0 * p.c3, b = 2.0 * p.c2, c = p.c1;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        cuts.push_back((-b - s) / (2.0 * a));
        cuts.push_back((-b + s) / (2.0 * a));
        std::sort(cuts.begin(), cuts.end());
    }
    const double R = 1.0 + (std::abs(p.c0) + std::abs(p.c1) + std::abs(p.c2)) / std::abs(p.c3);
    std::vector<double> knots{-R};
    for (double x : cuts) knots.push_back(x);
    knots.push_back(R);

    RootCensus out;
    auto add = [&](double r) {
        if (!out.roots.empty() && std::abs(out.roots.back() - r) < 1e-9) return;
        out.roots.push_back(r);
    };
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        const double flo = p(lo), fhi = p(hi);
        if (std::abs(flo) < 1e-12) add(lo);
        if (flo * fhi < 0.0) add(bisect(p, lo, hi));
        if (i + 2 == knots.size() && std::abs(fhi) < 1e-12) add(hi);
    }
    for (double r : out.roots) {
        const double d = p.slope(r);
        out.stability.push_back(d > 0.0 ? 1 : (d < 0.0 ? -1 : 0));
        out.degenerate.push_back(std::abs(d) < 1e-9);
    }
    return out;
}

int minimal_set_count(const RootCensus& rc) { return static_cast<int>(rc.roots.size()); }

double module_grid_oracle(const snbif::RhsModel& m, const snbif::BasePoint& omega, const snbif::DcInterval& J,
                          double eps, int n) {
    const auto& th = omega.theta;
    std::function<double(double)> fx;
    if (m.shape == snbif::RhsShape::CubicPoly) {
        const double c1 = trig(m.coeffs[1], th), c2 = trig(m.coeffs[2], th), c3 = trig(m.coeffs[3], th);
        fx = [=](double x) { return c1 + 2.0 * c2 * x + 3.0 * c3 * x * x; };
    } else {
        const double w = trig(m.halfwidth, th);
        fx = [=](double x) {
            if (x > w) return -3.0 * (x - w) * (x - w);
            if (x < -w) return -3.0 * (x + w) * (x + w);
            return 0.0;
        };
    }
    const double l = J.hi - J.lo;
    const double lo = J.lo + eps / 2, hi = J.hi - eps / 2;
    double best = INFINITY;
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        best = std::min(best, 2.0 * fx(x) - fx(x - eps / 2) - fx(x + eps / 2));
    }
    return eps / (4.0 * l * l) * best;
}

}  // namespace oracle
