#include "snbif/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "snbif/errors.hpp"
#include "snbif/parallel.hpp"

namespace snbif {

std::string to_string(PointKind k) {
    switch (k) {
        case PointKind::SaddleNodeUpper: return "SaddleNodeUpper";
        case PointKind::SaddleNodeLower: return "SaddleNodeLower";
        case PointKind::Transcritical: return "Transcritical";
        case PointKind::Pitchfork: return "Pitchfork";
    }
    return "?";
}

std::string to_string(DiagramClass c) {
    switch (c) {
        case DiagramClass::DoubleSaddleNode: return "DoubleSaddleNode";
        case DiagramClass::SingleMinimalSet: return "SingleMinimalSet";
        case DiagramClass::GlobalPitchfork: return "GlobalPitchfork";
        case DiagramClass::TranscriticalPlusSaddleNode: return "TranscriticalPlusSaddleNode";
        case DiagramClass::WeakTranscritical: return "WeakTranscritical";
        case DiagramClass::Undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(SpectrumObservable o) {
    return o == SpectrumObservable::A2Coefficient ? "a2" : "fx-zero-section";
}

namespace {

using CensusAt = std::function<MinimalSetReport(double)>;

LocateResult bisect_on(const CensusAt& run, double lo, double hi, double tol, const CensusPredicate& predicate) {
    if (!(lo < hi)) throw DomainError("locate needs lo < hi");
    const bool at_lo = predicate(run(lo));
    if (at_lo == predicate(run(hi))) throw DomainError("predicate takes the same value at both ends of the bracket");
    double a = lo, b = hi;
    while (b - a > tol) {
        std::optional<MinimalSetReport> probe;
        for (double frac : {0.5, 0.382, 0.618}) {
            auto r = run(a + frac * (b - a));
            if (!r.degraded) {
                probe = std::move(r);
                break;
            }
        }
        if (!probe) return {0.5 * (a + b), b - a, true};
        (predicate(*probe) == at_lo ? a : b) = probe->lambda;
    }
    return {0.5 * (a + b), b - a, false};
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

std::vector<MinimalSetReport> census_rows(const std::vector<double>& params, const CensusAt& run, int threads) {
    std::vector<MinimalSetReport> rows(params.size());
    parallel_for(params.size(), threads, [&](std::size_t i) { rows[i] = run(params[i]); });
    return rows;
}

std::string describe(const MinimalSetReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "lambda=" << r.lambda << ":";
    for (const auto& n : r.notes) os << " " << n << ";";
    return os.str();
}

// Which side survives a count change between rows a and b.
PointKind persisting_side(const MinimalSetReport& a, const MinimalSetReport& b, Family family) {
    if (family == Family::Linear) {
        if (a.upper_branch != b.upper_branch) return PointKind::SaddleNodeUpper;
        if (a.lower_branch != b.lower_branch) return PointKind::SaddleNodeLower;
        const auto& richer = a.count > b.count ? a : b;
        const bool positive = richer.sample.kappa && mean_of(*richer.sample.kappa) > 0.0;
        return positive ? PointKind::SaddleNodeUpper : PointKind::SaddleNodeLower;
    }
    const double da = std::abs(mean_of(a.sample.alpha) - mean_of(b.sample.alpha));
    const double db = std::abs(mean_of(a.sample.beta) - mean_of(b.sample.beta));
    return db <= da ? PointKind::SaddleNodeUpper : PointKind::SaddleNodeLower;
}

std::vector<double> sweep_params(double lo, double hi, int steps) {
    SweepRange r{lo, hi, steps};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = r.at(i);
    return out;
}

}  // namespace

LocateResult locate_bifurcation(const Scenario& s, double lo, double hi, const CensusPredicate& predicate) {
    return bisect_on([&s](double l) { return census(s, l); }, lo, hi, s.numerics.bisect_tol, predicate);
}

SpectrumEstimate estimate_spectrum(const Scenario& s, SpectrumObservable observable,
                                   const std::vector<double>& horizons) {
    if (horizons.empty()) throw DomainError("at least one horizon is required");
    Observable g;
    std::optional<double> constant;  // constant observables are averaged exactly
    if (observable == SpectrumObservable::A2Coefficient) {
        if (s.rhs.shape != RhsShape::CubicPoly) throw DomainError("a2 spectrum needs a cubic rhs");
        const TrigPoly a2 = s.rhs.coeffs[2];
        if (a2.is_constant()) constant = a2.mean;
        g = [a2](const BasePoint& p) { return a2(p); };
    } else {
        if (s.family != Family::Linear) throw DomainError("zero-section spectrum needs the Linear family");
        const RhsModel m = s.rhs;
        if (m.shape == RhsShape::CubicPoly && m.coeffs[1].is_constant()) constant = m.coeffs[1].mean;
        g = [m](const BasePoint& p) { return eval_derivatives(m, p, 0.0).fx; };
    }
    if (constant) {
        SpectrumEstimate est;
        for (double T : horizons) est.spread_history.push_back({T, *constant, *constant});
        std::sort(est.spread_history.begin(), est.spread_history.end(),
                  [](const auto& a, const auto& b) { return a.horizon < b.horizon; });
        est.low = est.high = *constant;
        est.horizon = est.spread_history.back().horizon;
        return est;
    }
    std::vector<double> sorted = horizons;
    std::sort(sorted.begin(), sorted.end());
    const auto pts = grid_points(s.base, 64);
    const auto control = s.numerics.control();
    std::vector<std::vector<double>> avg(pts.size());
    parallel_for(pts.size(), 0, [&](std::size_t i) { avg[i] = ergodic_averages(s.base, g, pts[i], sorted, control); });
    SpectrumEstimate est;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        double lo = avg[0][k], hi = avg[0][k];
        for (const auto& a : avg) {
            lo = std::min(lo, a[k]);
            hi = std::max(hi, a[k]);
        }
        est.spread_history.push_back({sorted[k], lo, hi});
    }
    est.low = est.spread_history.back().low;
    est.high = est.spread_history.back().high;
    est.horizon = est.spread_history.back().horizon;
    return est;
}

bool is_quadratic_showcase(const Scenario& s) {
    if (s.family != Family::Linear || s.rhs.shape != RhsShape::CubicPoly) return false;
    const auto& c = s.rhs.coeffs;
    return c[0].is_zero() && c[1].is_zero() && c[3].is_constant() && c[3].mean < 0.0;
}

DiagramClass spectrum_rule(const SpectrumEstimate& a2) {
    // Finite-time averages carry an O(1/T) error, and the drift between the last
    // two horizons bounds what is still moving. Membership is judged up to both.
    double tol = a2.horizon > 0.0 ? 1.0 / a2.horizon : 0.0;
    const auto& h = a2.spread_history;
    if (h.size() >= 2) {
        const auto& p = h[h.size() - 2];
        const auto& q = h.back();
        tol = std::max({tol, std::abs(q.low - p.low), std::abs(q.high - p.high)});
    }
    return a2.low - tol <= 0.0 && 0.0 <= a2.high + tol ? DiagramClass::GlobalPitchfork
                                                       : DiagramClass::TranscriticalPlusSaddleNode;
}

Classification classify(const Scenario& s, const BifurcationDiagram& d) {
    Classification out;
    const auto& rows = d.rows;
    if (rows.empty()) return out;

    if (d.family == Family::Additive) {
        const bool any3 = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.count == 3; });
        const bool all1 = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.count == 1; });
        const bool bad_point = std::any_of(d.points.begin(), d.points.end(), [](const auto& p) { return p.degraded; });
        if (bad_point) return out;
        if (any3) out.value = DiagramClass::DoubleSaddleNode;
        else if (all1) out.value = DiagramClass::SingleMinimalSet;
        out.sweep_verdict = to_string(out.value);
        return out;
    }

    DiagramClass verdict = DiagramClass::Undetermined;
    if (d.zero_crossing && rows.size() >= 2) {
        const double l0 = *d.zero_crossing;
        const double h = (rows.back().lambda - rows.front().lambda) / static_cast<double>(rows.size() - 1);
        const MinimalSetReport* below = nullptr;
        const MinimalSetReport* above = nullptr;
        for (const auto& r : rows) {
            if (r.lambda <= l0 - h) below = &r;
            if (!above && r.lambda >= l0 + h) above = &r;
        }
        if (below && above && !below->degraded && !above->degraded) {
            const int nb = int(below->lower_branch) + int(below->upper_branch);
            const bool both_above = above->lower_branch && above->upper_branch;
            const bool saddle = std::any_of(d.points.begin(), d.points.end(), [](const auto& p) {
                return !p.degraded && (p.kind == PointKind::SaddleNodeUpper || p.kind == PointKind::SaddleNodeLower);
            });
            if (nb == 0 && both_above) verdict = DiagramClass::GlobalPitchfork;
            else if (nb == 1 && both_above && saddle) verdict = DiagramClass::TranscriticalPlusSaddleNode;
        }
    }
    out.sweep_verdict = to_string(verdict);
    out.value = verdict;

    if (is_quadratic_showcase(s)) {
        const double T = s.numerics.birkhoff_T;
        const auto spec = estimate_spectrum(s, SpectrumObservable::A2Coefficient, {T / 4, T / 2, T});
        const DiagramClass rule = spectrum_rule(spec);
        out.spectrum_verdict = to_string(rule);
        if (rule != verdict) out.value = DiagramClass::Undetermined;
    }
    return out;
}

BifurcationDiagram sweep(const Scenario& s, int threads) {
    BifurcationDiagram d;
    d.family = s.family;
    const auto params = sweep_params(s.sweep.lambda_min, s.sweep.lambda_max, s.sweep.steps);
    const CensusAt run = [&s](double l) { return census(s, l); };
    d.rows = census_rows(params, run, threads);
    for (const auto& r : d.rows)
        if (r.degraded) d.degraded.push_back(describe(r));

    const double h = (s.sweep.lambda_max - s.sweep.lambda_min) / static_cast<double>(s.sweep.steps - 1);
    const BasePoint o = origin(s.base);
    if (s.family == Family::Linear) {
        auto g0 = [&](double l) { return zero_section_exponent(s, l, o); };
        double a = s.sweep.lambda_min, b = s.sweep.lambda_max;
        const double ga = g0(a), gb = g0(b);
        if ((ga < 0.0) != (gb < 0.0)) {
            while (b - a > s.numerics.bisect_tol) {
                const double mid = 0.5 * (a + b);
                ((g0(mid) < 0.0) == (ga < 0.0) ? a : b) = mid;
            }
            d.zero_crossing = 0.5 * (a + b);
            d.points.push_back({*d.zero_crossing, b - a, PointKind::Transcritical, false});
        }
        const double T = s.numerics.birkhoff_T;
        const auto spec = estimate_spectrum(s, SpectrumObservable::FxAtZeroSection, {T / 4, T / 2, T});
        d.zero_window = std::make_pair(0.0 - spec.high, 0.0 - spec.low);
    }

    for (std::size_t i = 0; i + 1 < d.rows.size(); ++i) {
        const auto& ra = d.rows[i];
        const auto& rb = d.rows[i + 1];
        if (ra.count == rb.count) continue;
        if (d.zero_crossing && ra.lambda <= *d.zero_crossing + h && rb.lambda >= *d.zero_crossing - h) continue;
        const int c = ra.count;
        BifurcationPoint p;
        try {
            const auto loc = bisect_on(run, ra.lambda, rb.lambda, s.numerics.bisect_tol,
                                       [c](const MinimalSetReport& r) { return r.count == c; });
            p.location = loc.location;
            p.width = loc.width;
            p.degraded = loc.degraded || ra.degraded || rb.degraded;
        } catch (const Error& e) {
            p.location = 0.5 * (ra.lambda + rb.lambda);
            p.width = rb.lambda - ra.lambda;
            p.degraded = true;
            d.degraded.push_back(std::string("locate failed: ") + e.what());
        }
        p.kind = persisting_side(ra, rb, s.family);
        d.points.push_back(p);
    }
    std::sort(d.points.begin(), d.points.end(), [](const auto& x, const auto& y) { return x.location < y.location; });

    const auto cls = classify(s, d);
    d.classification = cls.value;
    d.sweep_verdict = cls.sweep_verdict;
    d.spectrum_verdict = cls.spectrum_verdict;
    if (d.zero_crossing) {
        for (auto& p : d.points)
            if (p.location == *d.zero_crossing)
                p.kind = cls.value == DiagramClass::GlobalPitchfork ? PointKind::Pitchfork : PointKind::Transcritical;
    }
    return d;
}

BifurcationDiagram sweep_quadratic_shift(const Scenario& s, double xi_min, double xi_max, int steps, int threads) {
    if (s.family != Family::Linear) throw DomainError("the quadratic shift family needs the Linear family");
    if (steps < 2 || !(xi_min < xi_max)) throw DomainError("xi range needs steps >= 2 and xi_min < xi_max");
    BifurcationDiagram d;
    d.family = s.family;
    d.parameter = "xi";
    const CensusAt run = [&s](double xi) {
        auto r = census(shift_quadratic(s, xi), 0.0);
        r.lambda = xi;
        r.sample.lambda = xi;
        return r;
    };
    const auto params = sweep_params(xi_min, xi_max, steps);
    d.rows = census_rows(params, run, threads);
    for (const auto& r : d.rows)
        if (r.degraded) d.degraded.push_back(describe(r));

    for (std::size_t i = 0; i + 1 < d.rows.size(); ++i) {
        const auto& ra = d.rows[i];
        const auto& rb = d.rows[i + 1];
        if (ra.count == rb.count && ra.lower_branch == rb.lower_branch && ra.upper_branch == rb.upper_branch) continue;
        const bool lo_branch = ra.lower_branch, up_branch = ra.upper_branch;
        BifurcationPoint p;
        p.kind = PointKind::Transcritical;
        try {
            const auto loc = bisect_on(run, ra.lambda, rb.lambda, s.numerics.bisect_tol, [=](const MinimalSetReport& r) {
                return r.lower_branch == lo_branch && r.upper_branch == up_branch;
            });
            p.location = loc.location;
            p.width = loc.width;
            p.degraded = loc.degraded;
        } catch (const Error& e) {
            p.location = 0.5 * (ra.lambda + rb.lambda);
            p.width = rb.lambda - ra.lambda;
            p.degraded = true;
            d.degraded.push_back(std::string("locate failed: ") + e.what());
        }
        d.points.push_back(p);
    }

    // 2 -> 1 -> 2 with the signed branch switching sides and a zero section that
    // never becomes hyperbolic.
    const auto& first = d.rows.front();
    const auto& last = d.rows.back();
    const double margin = s.numerics.exp_margin;
    const bool ends = first.count == 2 && last.count == 2 &&
                      first.lower_branch != first.upper_branch && last.lower_branch != last.upper_branch &&
                      first.upper_branch != last.upper_branch;
    const bool middle = std::any_of(d.rows.begin(), d.rows.end(), [](const auto& r) { return r.count == 1; });
    const bool flat = std::all_of(d.rows.begin(), d.rows.end(), [margin](const auto& r) {
        return r.gamma_zero && std::abs(*r.gamma_zero) <= margin;
    });
    const bool clean = std::none_of(d.points.begin(), d.points.end(), [](const auto& p) { return p.degraded; });
    d.classification = ends && middle && flat && clean ? DiagramClass::WeakTranscritical : DiagramClass::Undetermined;
    d.sweep_verdict = to_string(d.classification);
    return d;
}

}  // namespace snbif
