#include "snbif/dconcavity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "snbif/errors.hpp"

namespace snbif {

std::string to_string(SdcClass c) {
    switch (c) {
        case SdcClass::NotDC: return "NotDC";
        case SdcClass::DC_only: return "DC_only";
        case SdcClass::SDC: return "SDC";
        case SdcClass::SDC_m_evidence: return "SDC_m_evidence";
    }
    return "?";
}

namespace {

void check_eps(const DcInterval& J, double eps) {
    if (!(J.lo < J.hi)) throw DomainError("interval needs lo < hi");
    if (!(eps >= 0.0 && eps <= J.length())) throw DomainError("eps must lie in [0, l(J)]");
}

double deadzone_bracket(const CoefficientValues& cv, double x, double h) {
    auto fx = [&cv](double y) { return evaluate(RhsShape::DeadzoneCubic, cv, y).fx; };
    return 2.0 * fx(x) - fx(x - h) - fx(x + h);
}

double deadzone_min(const CoefficientValues& cv, double a, double b, double h) {
    if (a >= b) return deadzone_bracket(cv, a, h);
    constexpr int kGrid = 257;
    const double dx = (b - a) / (kGrid - 1);
    int best = 0;
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double v = deadzone_bracket(cv, a + i * dx, h);
        if (v < vmin) {
            vmin = v;
            best = i;
        }
    }
    if (vmin <= 0.0) return vmin;
    // golden-section refinement in the neighbouring cells
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double l = a + std::max(0, best - 1) * dx, r = a + std::min(kGrid - 1, best + 1) * dx;
    double c = r - gr * (r - l), d = l + gr * (r - l);
    double fc = deadzone_bracket(cv, c, h), fd = deadzone_bracket(cv, d, h);
    for (int it = 0; it < 80 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
        if (fc < fd) {
            r = d;
            d = c;
            fd = fc;
            c = r - gr * (r - l);
            fc = deadzone_bracket(cv, c, h);
        } else {
            l = c;
            c = d;
            fc = fd;
            d = l + gr * (r - l);
            fd = deadzone_bracket(cv, d, h);
        }
    }
    return std::min({vmin, fc, fd});
}

bool is_dc(const RhsModel& m) {
    const std::size_t dim = m.wave_dim();
    if (m.shape == RhsShape::CubicPoly) return check_negative(m.coeffs[3], dim, false).verdict == SignVerdict::Holds;
    return check_nonnegative(m.halfwidth, dim).verdict == SignVerdict::Holds;
}

}  // namespace

double standardized_module(RhsShape shape, const CoefficientValues& cv, const DcInterval& J, double eps) {
    check_eps(J, eps);
    if (eps == 0.0) return 0.0;
    const double l = J.length();
    const double scale = eps / (4.0 * l * l);
    const double h = 0.5 * eps;
    if (shape == RhsShape::CubicPoly) {
        // f_x is quadratic in x, so the bracket is x-free: -6 c3 h^2
        return scale * (-6.0 * cv.c[3] * h * h);
    }
    return scale * deadzone_min(cv, J.lo + h, J.hi - h, h);
}

double standardized_module(const RhsModel& m, const BasePoint& omega, const DcInterval& J, double eps) {
    return standardized_module(m.shape, coefficients_at(m, omega.theta), J, eps);
}

ModuleCheck check_module_inequality(const RhsModel& m, const DcInterval& J, double eps, int trials,
                                    std::uint64_t seed) {
    check_eps(J, eps);
    if (!(eps > 0.0 && 2.0 * eps <= J.length())) throw DomainError("module inequality needs 0 < 2 eps <= l(J)");
    if (trials < 1) throw DomainError("trials must be positive");
    if (!is_dc(m)) throw ModelError("module inequality needs a (DC) model");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t dim = m.wave_dim();
    auto between = [&](double a, double b) { return a + (b - a) * unit(rng); };

    ModuleCheck out;
    out.min_slack = std::numeric_limits<double>::infinity();
    BasePoint omega{std::vector<double>(dim)};
    for (int t = 0; t < trials; ++t) {
        for (auto& th : omega.theta) th = unit(rng);
        const double x1 = between(J.lo, J.hi - 2.0 * eps);
        const double x2 = between(x1 + eps, J.hi - eps);
        const double x3 = between(x2 + eps, J.hi);
        double x0 = between(J.lo, J.hi);
        while (x0 == x1 || x0 == x2 || x0 == x3) x0 = between(J.lo, J.hi);
        const double b = standardized_module(m, omega, J, eps);
        const std::array<double, 3> left{x1, x0, x2}, right{x1, x0, x3};
        const double slack = divided_difference(m, omega, left) - divided_difference(m, omega, right) - b;
        if (slack < out.min_slack) {
            out.min_slack = slack;
            out.witness_omega = omega;
            out.witness_x = {x0, x1, x2, x3};
        }
    }
    out.passed = out.min_slack >= -1e-10;
    return out;
}

namespace {

double sample_step(const BaseFlowSpec& base) {
    double nu = 0.0;
    for (double v : base.frequencies) nu = std::max(nu, std::abs(v));
    return nu > 0.0 ? 1.0 / (64.0 * nu) : 0.0;
}

}  // namespace

double measure_positive_module(const Scenario& s, const DcInterval& J, double eps) {
    check_eps(J, eps);
    if (!(eps > 0.0 && 2.0 * eps <= J.length())) throw DomainError("measure needs 0 < 2 eps <= l(J)");
    const BasePoint o = origin(s.base);
    const OrbitCoefficients orbit(s.rhs, s.base, o);
    auto positive = [&](double t) { return standardized_module(s.rhs.shape, orbit.at(t), J, eps) > kPosTol; };
    if (s.base.dim() == 0) return positive(0.0) ? 1.0 : 0.0;

    const double T = s.numerics.birkhoff_T;
    const double h = sample_step(s.base);
    const auto steps = static_cast<std::size_t>(std::ceil(T / h));
    auto crossing = [&](double a, double b, bool at_a) {
        for (int it = 0; it < 60 && b - a > 1e-13; ++it) {
            const double mid = 0.5 * (a + b);
            (positive(mid) == at_a ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };
    double on = 0.0, t0 = 0.0;
    bool p0 = positive(0.0);
    double seg_start = 0.0;  // start of the current run of equal indicator values
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t1 = std::min(T, static_cast<double>(i) * h);
        const bool p1 = positive(t1);
        if (p1 != p0) {
            const double c = crossing(t0, t1, p0);
            if (p0) on += c - seg_start;
            seg_start = c;
            p0 = p1;
        }
        t0 = t1;
    }
    if (p0) on += T - seg_start;
    return std::clamp(on / T, 0.0, 1.0);
}

SdcReport classify_sdc(const Scenario& s, const DcInterval& J, const std::vector<double>& eps_grid) {
    if (eps_grid.empty()) throw DomainError("eps grid is empty");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        const double e = eps_grid[i];
        if (!(e > 0.0 && 2.0 * e <= J.length())) throw DomainError("eps grid must lie in (0, l(J)/2]");
        if (i > 0 && !(e > eps_grid[i - 1])) throw DomainError("eps grid must be strictly ascending");
    }
    SdcReport rep;
    rep.interval = J;
    rep.eps_grid = eps_grid;
    rep.horizon = s.numerics.birkhoff_T;
    rep.sample_step = sample_step(s.base);
    if (!validate_model(s).passed("d-concave")) {
        rep.classification = SdcClass::NotDC;
        return rep;
    }
    for (double e : eps_grid) rep.measures.push_back(measure_positive_module(s, J, e));
    const bool all_positive = std::all_of(rep.measures.begin(), rep.measures.end(), [](double v) { return v > 0.0; });
    rep.classification = all_positive ? SdcClass::SDC : SdcClass::DC_only;
    if (all_positive && rep.measures.front() < rep.measures.back() && rep.measures.front() < 1.0) {
        rep.warnings.push_back("positivity-set measure shrinks as eps decreases; a uniform lower bound over all "
                               "eps is not certified");
    }
    return rep;
}

}  // namespace snbif
