#include "snbif/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snbif/errors.hpp"
#include "snbif/integrator.hpp"

namespace snbif {

std::string to_string(Side side) { return side == Side::Lower ? "lower" : "upper"; }

std::string to_string(Track track) {
    switch (track) {
        case Track::Alpha: return "alpha";
        case Track::Beta: return "beta";
        case Track::Kappa: return "kappa";
    }
    return "?";
}

std::string to_string(Hyperbolicity h) {
    switch (h) {
        case Hyperbolicity::Attractive: return "attractive";
        case Hyperbolicity::Repulsive: return "repulsive";
        case Hyperbolicity::NonhyperbolicEvidence: return "nonhyperbolic-evidence";
    }
    return "?";
}

std::optional<double> coercive_radius(const Scenario& s, double lambda) {
    const bool linear = s.family == Family::Linear;
    if (s.rhs.shape == RhsShape::CubicPoly) {
        const auto& c = s.rhs.coeffs;
        const double m3 = -c[3].upper_bound();
        if (!(m3 > 0.0)) return std::nullopt;
        TrigPoly c1 = c[1], c0 = c[0];
        (linear ? c1 : c0).mean += lambda;
        // |c2 x^2 + c1 x + c0| <= (|c2|+|c1|+|c0|) x^2 < m3 |x|^3 once |x| >= R
        return 1.0 + (c[2].sup_bound() + c1.sup_bound() + c0.sup_bound()) / m3;
    }
    const double w = std::max(std::abs(s.rhs.halfwidth.upper_bound()), std::abs(s.rhs.halfwidth.lower_bound()));
    return 2.0 * w + 2.0 + 2.0 * std::abs(lambda);
}

std::pair<double, double> bracketing_bounds(const Scenario& s, double lambda) {
    const auto r = coercive_radius(s, lambda);
    if (!r) throw ModelError("model is not coercive: the leading coefficient must be negative everywhere");
    return {-*r, *r};
}

double pullback_cap(const Scenario& s) {
    // Autonomous fibers converge algebraically at nonhyperbolic points; adaptive
    // steps grow with t there, so very long horizons stay cheap.
    const double doublings = s.base.dim() == 0 ? 60.0 : 10.0;
    return std::ldexp(s.numerics.pullback_T, static_cast<int>(doublings));
}

OrbitPullback pullback_orbit(const Scenario& s, double lambda, const BasePoint& omega,
                             const std::vector<double>& times, Side side) {
    if (times.empty()) throw DomainError("pullback needs at least one time");
    const FiberField field(s, lambda, omega);
    const double rho = side == Side::Lower ? -field.radius() : field.radius();
    if (!std::isfinite(rho)) throw ModelError("model is not coercive: the leading coefficient must be negative everywhere");
    const double tol = s.numerics.pullback_tol;
    const double cap = pullback_cap(s);

    OrbitPullback out;
    std::vector<double> vals(times.size());
    for (double H = s.numerics.pullback_T;; H *= 2.0) {
        double x = rho;
        double t = times.front() - H;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto p = field.flow(x, t, times[k]);
            if (p.status != SolveStatus::Ok)
                throw IntegrationFailure("pullback solve stopped early (" + to_string(p.status) + ")");
            x = p.x;
            t = times[k];
            vals[k] = x;
        }
        out.horizon = H;
        if (!out.values.empty()) {
            double diff = 0.0;
            for (std::size_t k = 0; k < vals.size(); ++k) {
                diff = std::max(diff, std::abs(vals[k] - out.values[k]));
                // Lower limits rise with the horizon, upper limits fall.
                const double against = side == Side::Lower ? out.values[k] - vals[k] : vals[k] - out.values[k];
                out.monotone_defect = std::max(out.monotone_defect, against);
            }
            out.previous = std::move(out.values);
            out.values = vals;
            if (diff < tol) {
                out.converged = true;
                return out;
            }
        } else {
            out.values = vals;
        }
        if (H >= cap) return out;
    }
}

PullbackResult pullback_equilibrium(const Scenario& s, double lambda, const BasePoint& omega, Side side) {
    const auto run = pullback_orbit(s, lambda, omega, {0.0}, side);
    if (!run.converged)
        throw NonConvergence("pullback limit did not settle by horizon " + std::to_string(run.horizon),
                             run.previous.front(), run.values.front(), run.horizon);
    return {run.values.front(), run.horizon};
}

namespace {

constexpr double kBisectWidth = 1e-10;
constexpr double kWarmup = 64.0;  // backward settling time before the repeller is sampled

constexpr int kMerged = 2;

// -1: probe joins the lower trajectory, +1: the upper one, 0: undecided by the
// cap, kMerged: the outer trajectories themselves coalesced (no repeller between).
int classify_probe(const FiberField& field, double lo, double x0, double hi, double cap) {
    const double d_lo0 = x0 - lo, d_hi0 = hi - x0;
    const double thr = std::min(1e-6, 1e-3 * std::min(d_lo0 / d_hi0, d_hi0 / d_lo0));
    int verdict = 0;
    auto stop = [&](double, const rk::State<3>& y) {
        const double a = y[1] - y[0], b = y[2] - y[1];
        if (a + b <= kBisectWidth) verdict = kMerged;
        else if (a <= thr * b) verdict = -1;
        else if (b <= thr * a) verdict = 1;
        return verdict != 0;
    };
    field.flow_many<3>(rk::State<3>{lo, x0, hi}, 0.0, cap, stop);
    return verdict;
}

std::optional<double> bisect_with(const FiberField& field, const Scenario& s, double lo, double hi) {
    const double cap = std::ldexp(s.numerics.pullback_T, 10);
    const double off = std::min(s.numerics.sep_tol, 0.25 * (hi - lo));
    double a = lo + off, b = hi - off;
    const int ca = classify_probe(field, lo, a, hi, cap);
    if (ca == kMerged) return std::nullopt;
    if (ca == 0) return a;
    const int cb = classify_probe(field, lo, b, hi, cap);
    if (cb == kMerged) return std::nullopt;
    if (cb == 0) return b;
    if (ca == cb || ca > cb) return std::nullopt;
    while (b - a > kBisectWidth) {
        const double mid = 0.5 * (a + b);
        const int c = classify_probe(field, lo, mid, hi, cap);
        if (c == kMerged) return std::nullopt;
        if (c == 0) return mid;
        (c < 0 ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

double track_delimiter(const Scenario& s, double lambda, const BasePoint& omega, double x0, Side side,
                       double horizon) {
    const FiberField field(s, lambda, omega);
    const double rho = side == Side::Lower ? -field.radius() : field.radius();
    const double T = s.numerics.birkhoff_T;
    constexpr int kSegments = 16;
    const double seg = T / kSegments;
    double x = x0, integral = 0.0;
    for (int j = 0; j < kSegments; ++j) {
        const double t0 = j * seg, t1 = (j + 1) * seg;
        const auto p = field.flow(x, t0, t1);
        if (p.status != SolveStatus::Ok)
            throw TrackingLost(to_string(side) + " delimiter track stopped early", static_cast<double>(j) / kSegments);
        integral += p.fx_integral;
        const auto anchor = field.flow(rho, t1 - horizon, t1);
        if (anchor.status != SolveStatus::Ok || std::abs(anchor.x - p.x) > s.numerics.sep_tol)
            throw TrackingLost(to_string(side) + " delimiter drifted from its pullback anchor",
                               static_cast<double>(j + 1) / kSegments);
        x = anchor.x;
    }
    return integral / T;
}

struct RepellerRun {
    std::vector<double> values;  // at the requested times
    double gamma = 0.0;
};

// Backward shadowing: the repeller attracts in reverse time, so a bisected
// anchor far ahead is integrated back over [0, T], sampling `times` on the way.
RepellerRun shadow_repeller(const FiberField& field, double kappa_anchor, double t_anchor, double T,
                            const std::vector<double>& times) {
    std::vector<double> bps(times.begin(), times.end());
    bps.push_back(T);
    bps.push_back(0.0);
    std::sort(bps.begin(), bps.end(), std::greater<>());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    RepellerRun out;
    out.values.assign(times.size(), std::numeric_limits<double>::quiet_NaN());
    double x = kappa_anchor, cur = t_anchor, integral = 0.0;
    for (double bp : bps) {
        const auto p = field.flow(x, cur, bp);
        if (p.status != SolveStatus::Ok)
            throw TrackingLost("repeller shadow escaped", std::clamp((t_anchor - bp) / t_anchor, 0.0, 1.0));
        if (cur <= T) integral += p.fx_integral;
        x = p.x;
        cur = bp;
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] == bp) out.values[k] = x;
    }
    out.gamma = -integral / T;
    return out;
}

struct Bracket {
    double lo, hi;
};

// The pair of attracting trajectories that enclose the repeller at omega . t.
std::optional<Bracket> repeller_bracket(const Scenario& s, double alpha, double beta) {
    const double sep = s.numerics.sep_tol;
    if (s.family == Family::Additive) return Bracket{alpha, beta};
    const bool lower = alpha <= -sep, upper = beta >= sep;
    if (lower == upper) return std::nullopt;
    return upper ? Bracket{0.0, beta} : Bracket{alpha, 0.0};
}

RepellerRun repeller_along_orbit(const Scenario& s, double lambda, const BasePoint& omega,
                                 const std::vector<double>& times) {
    const double T = s.numerics.birkhoff_T;
    const double t_last = times.empty() ? 0.0 : times.back();
    const double ta = std::max(T, t_last) + kWarmup;
    const BasePoint wa = advance(s.base, omega, ta);
    const double a = pullback_equilibrium(s, lambda, wa, Side::Lower).value;
    const double b = pullback_equilibrium(s, lambda, wa, Side::Upper).value;
    const auto br = repeller_bracket(s, a, b);
    if (!br || !(br->lo + s.numerics.sep_tol < br->hi)) throw TrackingLost("no repeller bracket at the anchor", 0.0);
    const FiberField field(s, lambda, omega);
    const FiberField anchor_field(s, lambda, wa);
    const auto k = bisect_with(anchor_field, s, br->lo, br->hi);
    if (!k) throw TrackingLost("repeller not found at the anchor", 0.0);
    return shadow_repeller(field, *k, ta, T, times);
}

}  // namespace

std::optional<double> bisect_repeller(const Scenario& s, double lambda, const BasePoint& omega, double alpha,
                                      double beta) {
    if (!(alpha + s.numerics.sep_tol < beta)) throw DomainError("bisect_repeller needs alpha + sep_tol < beta");
    const FiberField field(s, lambda, omega);
    return bisect_with(field, s, alpha, beta);
}

double zero_section_exponent(const Scenario& s, double lambda, const BasePoint& omega) {
    const RhsModel& m = s.rhs;
    const double shift = s.family == Family::Linear ? lambda : 0.0;
    Observable g = [&m, shift](const BasePoint& p) { return eval_derivatives(m, p, 0.0).fx + shift; };
    return ergodic_average(s.base, g, omega, s.numerics.birkhoff_T, s.numerics.control());
}

double lyapunov_exponent(const Scenario& s, double lambda, const BasePoint& omega, Track track) {
    if (track != Track::Kappa) {
        const Side side = track == Track::Alpha ? Side::Lower : Side::Upper;
        const auto pb = pullback_equilibrium(s, lambda, omega, side);
        return track_delimiter(s, lambda, omega, pb.value, side, pb.horizon);
    }
    if (s.family == Family::Linear) {
        const double sep = s.numerics.sep_tol;
        const double a = pullback_equilibrium(s, lambda, omega, Side::Lower).value;
        const double b = pullback_equilibrium(s, lambda, omega, Side::Upper).value;
        // with both signed branches present the middle set is the zero section
        if (a <= -sep && b >= sep) return zero_section_exponent(s, lambda, omega);
    }
    return repeller_along_orbit(s, lambda, omega, {}).gamma;
}

Hyperbolicity classify_exponent(double gamma, double margin) {
    if (gamma < -margin) return Hyperbolicity::Attractive;
    if (gamma > margin) return Hyperbolicity::Repulsive;
    return Hyperbolicity::NonhyperbolicEvidence;
}

MinimalSetReport census(const Scenario& s, double lambda) {
    const auto& num = s.numerics;
    const double sep = num.sep_tol, margin = num.exp_margin;
    MinimalSetReport rep;
    rep.lambda = lambda;
    auto& smp = rep.sample;
    smp.lambda = lambda;

    const std::size_t n = s.base.dim() == 0 ? 1 : static_cast<std::size_t>(num.grid_n);
    smp.grid = grid_points(s.base, n);
    const auto times = grid_orbit_times(s.base, n);
    const BasePoint o = origin(s.base);

    const auto low = pullback_orbit(s, lambda, o, times, Side::Lower);
    const auto up = pullback_orbit(s, lambda, o, times, Side::Upper);
    smp.alpha = low.values;
    smp.beta = up.values;
    smp.pullback_horizon_used = std::max(low.horizon, up.horizon);
    const bool converged = low.converged && up.converged;

    auto degrade = [&rep](const std::string& why) {
        rep.degraded = true;
        rep.notes.push_back(why);
    };
    auto guarded = [&](auto&& fn) -> std::optional<double> {
        try {
            return fn();
        } catch (const Error& e) {
            degrade(e.what());
            return std::nullopt;
        }
    };
    if (std::max(low.monotone_defect, up.monotone_defect) > 10.0 * num.pullback_tol)
        rep.notes.push_back("pullback sequence not monotone beyond tolerance");

    rep.gap_min = std::numeric_limits<double>::infinity();
    rep.gap_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double g = smp.beta[k] - smp.alpha[k];
        rep.gap_min = std::min(rep.gap_min, g);
        rep.gap_max = std::max(rep.gap_max, g);
    }
    rep.pinched = rep.gap_min < num.pinch_tol && rep.gap_max >= sep;

    smp.gamma_alpha = guarded([&] { return track_delimiter(s, lambda, o, smp.alpha[0], Side::Lower, low.horizon); });
    smp.gamma_beta = guarded([&] { return track_delimiter(s, lambda, o, smp.beta[0], Side::Upper, up.horizon); });

    auto summary = [margin](std::string role, std::optional<double> g) {
        return SetSummary{std::move(role), g, g ? classify_exponent(*g, margin) : Hyperbolicity::NonhyperbolicEvidence};
    };
    auto pattern = [margin](std::optional<double> a, std::optional<double> k, std::optional<double> b) {
        return a && k && b && *a < -margin && *k > margin && *b < -margin;
    };

    // Looks for a repeller between the attracting trajectories lo_k..hi_k.
    auto find_repeller = [&](const std::vector<double>& lo, const std::vector<double>& hi) -> bool {
        std::size_t best = 0;
        double width = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (hi[k] - lo[k] > width) {
                width = hi[k] - lo[k];
                best = k;
            }
        }
        if (!(width > sep)) return false;
        std::optional<double> k0;
        try {
            k0 = bisect_repeller(s, lambda, smp.grid[best], lo[best], hi[best]);
        } catch (const Error& e) {
            degrade(e.what());
            return false;
        }
        if (!k0) return false;
        try {
            auto run = repeller_along_orbit(s, lambda, o, times);
            smp.kappa = std::move(run.values);
            smp.gamma_kappa = run.gamma;
        } catch (const Error& e) {
            degrade(std::string("repeller found but not propagated: ") + e.what());
            smp.kappa = std::vector<double>(n, std::numeric_limits<double>::quiet_NaN());
            (*smp.kappa)[best] = *k0;
        }
        return true;
    };
    auto kappa_clear_of = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
        if (!smp.kappa) return false;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = (*smp.kappa)[k];
            if (std::isnan(v)) continue;
            if (v < lo[k] + sep || v > hi[k] - sep) return false;
        }
        return true;
    };

    if (s.family == Family::Additive) {
        if (rep.gap_max < sep) {
            // unconverged bounds overestimate the gap, so this verdict is sound either way
            rep.count = 1;
            rep.sets.push_back(summary("single", smp.gamma_beta ? smp.gamma_beta : smp.gamma_alpha));
            return rep;
        }
        if (!converged) degrade("pullback did not converge; the attractor gap may be overestimated");
        const bool found = find_repeller(smp.alpha, smp.beta);
        rep.sets.push_back(summary("lower", smp.gamma_alpha));
        if (found) rep.sets.push_back(summary("middle", smp.gamma_kappa));
        rep.sets.push_back(summary("upper", smp.gamma_beta));
        rep.count = found && pattern(smp.gamma_alpha, smp.gamma_kappa, smp.gamma_beta) &&
                            kappa_clear_of(smp.alpha, smp.beta)
                        ? 3
                        : 2;
        return rep;
    }

    // Linear family: the zero section is always invariant.
    rep.gamma_zero = guarded([&] { return zero_section_exponent(s, lambda, o); });
    const double amin = *std::min_element(smp.alpha.begin(), smp.alpha.end());
    const double bmax = *std::max_element(smp.beta.begin(), smp.beta.end());
    rep.lower_branch = amin <= -sep;
    rep.upper_branch = bmax >= sep;
    // Unconverged lower values sit below the limit and upper values above it, so
    // only a "present" verdict can be wrong.
    if ((rep.lower_branch && !low.converged) || (rep.upper_branch && !up.converged))
        degrade("pullback did not converge; a signed branch may be spurious");

    if (rep.lower_branch && rep.upper_branch) {
        smp.kappa = std::vector<double>(n, 0.0);
        smp.gamma_kappa = rep.gamma_zero;
        rep.sets = {summary("lower", smp.gamma_alpha), summary("middle", rep.gamma_zero),
                    summary("upper", smp.gamma_beta)};
        rep.count = pattern(smp.gamma_alpha, rep.gamma_zero, smp.gamma_beta) && kappa_clear_of(smp.alpha, smp.beta)
                        ? 3
                        : 2;
        return rep;
    }
    if (!rep.lower_branch && !rep.upper_branch) {
        rep.count = 1;
        rep.sets.push_back(summary("single", rep.gamma_zero));
        return rep;
    }
    const std::vector<double> zero(n, 0.0);
    const auto& lo = rep.upper_branch ? zero : smp.alpha;
    const auto& hi = rep.upper_branch ? smp.beta : zero;
    const bool found = find_repeller(lo, hi);
    if (rep.upper_branch) {
        rep.sets.push_back(summary("lower", rep.gamma_zero));
        if (found) rep.sets.push_back(summary("middle", smp.gamma_kappa));
        rep.sets.push_back(summary("upper", smp.gamma_beta));
        rep.count = found && pattern(rep.gamma_zero, smp.gamma_kappa, smp.gamma_beta) && kappa_clear_of(lo, hi) ? 3 : 2;
    } else {
        rep.sets.push_back(summary("lower", smp.gamma_alpha));
        if (found) rep.sets.push_back(summary("middle", smp.gamma_kappa));
        rep.sets.push_back(summary("upper", rep.gamma_zero));
        rep.count = found && pattern(smp.gamma_alpha, smp.gamma_kappa, rep.gamma_zero) && kappa_clear_of(lo, hi) ? 3 : 2;
    }
    return rep;
}

}  // namespace snbif
