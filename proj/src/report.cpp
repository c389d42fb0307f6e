#include "snbif/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace snbif {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json opt(const std::optional<double>& v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

std::optional<double> finite_mean(const std::vector<double>& v) {
    double acc = 0.0;
    std::size_t n = 0;
    for (double x : v) {
        if (std::isnan(x)) continue;
        acc += x;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return acc / static_cast<double>(n);
}

json numbers(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
}

}  // namespace

json to_json(const BasePoint& p) { return p.theta; }

json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name}, {"passed", c.passed}, {"decided_by", c.decided_by}, {"detail", c.detail}};
        if (c.witness_omega) j["witness_omega"] = to_json(*c.witness_omega);
        if (c.witness_x) j["witness_x"] = *c.witness_x;
        checks.push_back(std::move(j));
    }
    return {{"all_passed", r.all_passed()}, {"checks", checks}};
}

json to_json(const OdeSolution& s) {
    return {{"t_end", s.t_end},   {"x_end", s.x_end}, {"ux", opt(s.ux)},
            {"uxx", opt(s.uxx)},  {"uxxx", opt(s.uxxx)}, {"fx_integral", s.fx_integral},
            {"status", to_string(s.status)}};
}

json to_json(const MinimalSetReport& r, bool with_grid) {
    json sets = json::array();
    for (const auto& s : r.sets)
        sets.push_back({{"role", s.role}, {"exponent", opt(s.exponent)}, {"hyperbolicity", to_string(s.hyperbolicity)}});
    const auto& smp = r.sample;
    json j{{"lambda", r.lambda},
           {"count", r.count},
           {"sets", sets},
           {"pinched", r.pinched},
           {"gap_min", r.gap_min},
           {"gap_max", r.gap_max},
           {"alpha_mean", opt(finite_mean(smp.alpha))},
           {"beta_mean", opt(finite_mean(smp.beta))},
           {"kappa_mean", smp.kappa ? opt(finite_mean(*smp.kappa)) : json(nullptr)},
           {"gamma_alpha", opt(smp.gamma_alpha)},
           {"gamma_kappa", opt(smp.gamma_kappa)},
           {"gamma_beta", opt(smp.gamma_beta)},
           {"pullback_horizon_used", smp.pullback_horizon_used},
           {"degraded", r.degraded},
           {"notes", r.notes}};
    if (r.gamma_zero || r.lower_branch || r.upper_branch) {
        j["gamma_zero"] = opt(r.gamma_zero);
        j["lower_branch"] = r.lower_branch;
        j["upper_branch"] = r.upper_branch;
    }
    if (with_grid) {
        json grid = json::array();
        for (const auto& p : smp.grid) grid.push_back(to_json(p));
        j["grid"] = grid;
        j["alpha"] = numbers(smp.alpha);
        j["beta"] = numbers(smp.beta);
        j["kappa"] = smp.kappa ? numbers(*smp.kappa) : json(nullptr);
    }
    return j;
}

json to_json(const SpectrumEstimate& e) {
    json hist = json::array();
    for (const auto& h : e.spread_history) hist.push_back({{"horizon", h.horizon}, {"low", h.low}, {"high", h.high}});
    return {{"low", e.low}, {"high", e.high}, {"horizon", e.horizon}, {"spread_history", hist}};
}

json to_json(const SdcReport& r) {
    return {{"interval", {r.interval.lo, r.interval.hi}},
            {"eps_grid", r.eps_grid},
            {"measures", r.measures},
            {"classification", to_string(r.classification)},
            {"resolution", {{"horizon", r.horizon}, {"pos_tol", r.pos_tol}, {"sample_step", r.sample_step}}},
            {"evidence", r.evidence},
            {"warnings", r.warnings},
            {"note", r.note}};
}

json to_json(const BifurcationDiagram& d) {
    json rows = json::array();
    for (const auto& r : d.rows) rows.push_back(to_json(r, false));
    json points = json::array();
    for (const auto& p : d.points)
        points.push_back(
            {{"location", p.location}, {"width", p.width}, {"kind", to_string(p.kind)}, {"degraded", p.degraded}});
    json j{{"family", to_string(d.family)},
           {"parameter", d.parameter},
           {"classification", to_string(d.classification)},
           {"points", points},
           {"rows", rows},
           {"degraded", d.degraded}};
    j["zero_crossing"] = opt(d.zero_crossing);
    j["zero_window"] = d.zero_window ? json{d.zero_window->first, d.zero_window->second} : json(nullptr);
    j["sweep_verdict"] = d.sweep_verdict ? json(*d.sweep_verdict) : json(nullptr);
    j["spectrum_verdict"] = d.spectrum_verdict ? json(*d.spectrum_verdict) : json(nullptr);
    return j;
}

std::string diagram_csv(const BifurcationDiagram& d) {
    std::ostringstream os;
    os << kCsvHeader << "\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : d.rows) {
        const auto& smp = r.sample;
        os << format_double(r.lambda) << ',' << r.count << ',' << (r.pinched ? 1 : 0) << ','
           << cell(finite_mean(smp.alpha)) << ',' << (smp.kappa ? cell(finite_mean(*smp.kappa)) : "") << ','
           << cell(finite_mean(smp.beta)) << ',' << cell(smp.gamma_alpha) << ',' << cell(smp.gamma_kappa) << ','
           << cell(smp.gamma_beta) << ',' << format_double(r.gap_min) << ',' << format_double(r.gap_max) << ','
           << format_double(smp.pullback_horizon_used) << "\n";
    }
    return os.str();
}

}  // namespace snbif
