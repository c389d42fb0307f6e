#include "snbif/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "snbif/errors.hpp"

namespace snbif {

using nlohmann::json;

std::string to_string(Family family) { return family == Family::Additive ? "additive" : "linear"; }

double SweepRange::at(int i) const {
    if (i == steps - 1) return lambda_max;
    return lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void NumericsConfig::validate() const {
    const std::pair<const char*, double> positive[] = {
        {"rtol", rtol},           {"atol", atol},         {"pullback_T", pullback_T},
        {"pullback_tol", pullback_tol}, {"birkhoff_T", birkhoff_T}, {"sep_tol", sep_tol},
        {"pinch_tol", pinch_tol}, {"exp_margin", exp_margin}, {"bisect_tol", bisect_tol}};
    for (const auto& [name, v] : positive) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(std::string("numerics.") + name + " must be positive");
    }
    if (grid_n < 1) throw ParseError("numerics.grid_n must be a positive integer");
    if (!(pinch_tol < sep_tol)) throw ParseError("numerics.pinch_tol must be smaller than sep_tol");
}

rk::Control NumericsConfig::control() const {
    rk::Control c;
    c.rtol = rtol;
    c.atol = atol;
    return c;
}

// ---------------------------------------------------------------------------
// Strict reader

namespace {

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!ok.count(it.key())) throw ParseError("unknown key \"" + sub(it.key()) + "\"");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    const json& required(const char* key) const {
        if (!j_.contains(key)) throw ParseError("missing required field \"" + sub(key) + "\"");
        return j_.at(key);
    }

    double number(const char* key) const { return as_number(required(key), sub(key)); }

    double number_or(const char* key, double fallback) const {
        return has(key) ? as_number(j_.at(key), sub(key)) : fallback;
    }

    int integer(const char* key) const { return as_integer(required(key), sub(key)); }

    int integer_or(const char* key, int fallback) const {
        return has(key) ? as_integer(j_.at(key), sub(key)) : fallback;
    }

    std::string string(const char* key) const {
        const auto& v = required(key);
        if (!v.is_string()) throw ParseError("type mismatch at \"" + sub(key) + "\": expected string");
        return v.get<std::string>();
    }

    Reader object(const char* key) const { return Reader(required(key), sub(key)); }

    std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError((path_.empty() ? std::string("scenario") : path_) + ": " + msg);
    }

    static double as_number(const json& v, const std::string& where) {
        if (!v.is_number()) throw ParseError("type mismatch at \"" + where + "\": expected number");
        return v.get<double>();
    }

    static int as_integer(const json& v, const std::string& where) {
        if (!v.is_number_integer()) throw ParseError("type mismatch at \"" + where + "\": expected integer");
        return v.get<int>();
    }

    const json& raw() const { return j_; }

private:
    const json& j_;
    std::string path_;
};

TrigPoly read_trig_poly(const Reader& r, std::size_t dim) {
    r.allow({"mean", "harmonics"});
    TrigPoly p;
    p.mean = r.number("mean");
    if (!r.has("harmonics")) return p;
    const auto& hs = r.raw().at("harmonics");
    const std::string hpath = r.sub("harmonics");
    if (!hs.is_array()) throw ParseError("type mismatch at \"" + hpath + "\": expected array");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        Reader h(hs[i], hpath + "[" + std::to_string(i) + "]");
        h.allow({"wave", "amplitude", "phase"});
        Harmonic out;
        const auto& wave = h.required("wave");
        if (!wave.is_array()) throw ParseError("type mismatch at \"" + h.sub("wave") + "\": expected array");
        bool nonzero = false;
        for (const auto& k : wave) {
            out.wave.push_back(Reader::as_integer(k, h.sub("wave")));
            nonzero = nonzero || out.wave.back() != 0;
        }
        if (out.wave.size() != dim)
            throw ParseError("\"" + h.sub("wave") + "\" has length " + std::to_string(out.wave.size()) +
                             ", base dimension is " + std::to_string(dim));
        if (!nonzero) throw ParseError("\"" + h.sub("wave") + "\" must be a nonzero wave vector");
        out.amplitude = h.number("amplitude");
        out.phase = h.number_or("phase", 0.0);
        p.harmonics.push_back(std::move(out));
    }
    return p;
}

json write_trig_poly(const TrigPoly& p) {
    json hs = json::array();
    for (const auto& h : p.harmonics) hs.push_back({{"wave", h.wave}, {"amplitude", h.amplitude}, {"phase", h.phase}});
    return {{"mean", p.mean}, {"harmonics", hs}};
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    Reader top(doc, "");
    top.allow({"base", "rhs", "family", "sweep", "numerics"});

    Scenario s;
    {
        Reader b = top.object("base");
        b.allow({"kind", "frequencies"});
        s.base.kind = flow_kind_from_string(b.string("kind"));
        if (b.has("frequencies")) {
            const auto& fr = b.raw().at("frequencies");
            if (!fr.is_array()) throw ParseError("type mismatch at \"base.frequencies\": expected array");
            for (const auto& v : fr) s.base.frequencies.push_back(Reader::as_number(v, "base.frequencies"));
        }
        s.base.validate();
    }
    const std::size_t dim = s.base.dim();
    {
        Reader r = top.object("rhs");
        const std::string shape = r.string("shape");
        if (shape == "cubic") {
            r.allow({"shape", "c0", "c1", "c2", "c3"});
            const char* names[] = {"c0", "c1", "c2", "c3"};
            s.rhs.shape = RhsShape::CubicPoly;
            for (std::size_t k = 0; k < 4; ++k) {
                if (k < 3 && !r.has(names[k])) continue;  // lower-order terms default to zero
                s.rhs.coeffs[k] = read_trig_poly(r.object(names[k]), dim);
            }
        } else if (shape == "deadzone") {
            r.allow({"shape", "w"});
            s.rhs = RhsModel::deadzone(read_trig_poly(r.object("w"), dim));
        } else {
            throw ParseError("unknown rhs shape \"" + shape + "\"");
        }
    }
    {
        const std::string fam = top.string("family");
        if (fam == "additive")
            s.family = Family::Additive;
        else if (fam == "linear")
            s.family = Family::Linear;
        else
            throw ParseError("unknown family \"" + fam + "\"");
    }
    {
        Reader sw = top.object("sweep");
        sw.allow({"lambda_min", "lambda_max", "steps"});
        s.sweep.lambda_min = sw.number("lambda_min");
        s.sweep.lambda_max = sw.number("lambda_max");
        s.sweep.steps = sw.integer("steps");
        if (s.sweep.steps < 2) throw ParseError("steps ≥ 2 required");
        if (!(s.sweep.lambda_min < s.sweep.lambda_max)) throw ParseError("lambda_min < lambda_max required");
    }
    if (top.has("numerics")) {
        Reader n = top.object("numerics");
        n.allow({"rtol", "atol", "pullback_T", "pullback_tol", "grid_n", "birkhoff_T", "sep_tol", "pinch_tol",
                 "exp_margin", "bisect_tol"});
        auto& c = s.numerics;
        c.rtol = n.number_or("rtol", c.rtol);
        c.atol = n.number_or("atol", c.atol);
        c.pullback_T = n.number_or("pullback_T", c.pullback_T);
        c.pullback_tol = n.number_or("pullback_tol", c.pullback_tol);
        c.grid_n = n.integer_or("grid_n", c.grid_n);
        c.birkhoff_T = n.number_or("birkhoff_T", c.birkhoff_T);
        c.sep_tol = n.number_or("sep_tol", c.sep_tol);
        c.pinch_tol = n.number_or("pinch_tol", c.pinch_tol);
        c.exp_margin = n.number_or("exp_margin", c.exp_margin);
        c.bisect_tol = n.number_or("bisect_tol", c.bisect_tol);
    }
    s.numerics.validate();

    if (s.family == Family::Linear && s.rhs.shape == RhsShape::CubicPoly && !s.rhs.coeffs[0].is_zero())
        throw ParseError("f(·,0)=0 required for Linear family");
    return s;
}

std::string emit_scenario(const Scenario& s) {
    json doc;
    doc["base"] = {{"kind", to_string(s.base.kind)}, {"frequencies", s.base.frequencies}};
    if (s.rhs.shape == RhsShape::CubicPoly) {
        doc["rhs"] = {{"shape", "cubic"},
                      {"c0", write_trig_poly(s.rhs.coeffs[0])},
                      {"c1", write_trig_poly(s.rhs.coeffs[1])},
                      {"c2", write_trig_poly(s.rhs.coeffs[2])},
                      {"c3", write_trig_poly(s.rhs.coeffs[3])}};
    } else {
        doc["rhs"] = {{"shape", "deadzone"}, {"w", write_trig_poly(s.rhs.halfwidth)}};
    }
    doc["family"] = to_string(s.family);
    doc["sweep"] = {{"lambda_min", s.sweep.lambda_min}, {"lambda_max", s.sweep.lambda_max}, {"steps", s.sweep.steps}};
    const auto& n = s.numerics;
    doc["numerics"] = {{"rtol", n.rtol},
                       {"atol", n.atol},
                       {"pullback_T", n.pullback_T},
                       {"pullback_tol", n.pullback_tol},
                       {"grid_n", n.grid_n},
                       {"birkhoff_T", n.birkhoff_T},
                       {"sep_tol", n.sep_tol},
                       {"pinch_tol", n.pinch_tol},
                       {"exp_margin", n.exp_margin},
                       {"bisect_tol", n.bisect_tol}};
    return doc.dump(2) + "\n";
}

void apply_numerics_override(Scenario& s, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("override must look like key=value: " + assignment);
    std::string key = assignment.substr(0, eq);
    if (key.rfind("numerics.", 0) == 0) key = key.substr(9);
    const std::string value = assignment.substr(eq + 1);
    double v = 0.0;
    std::istringstream is(value);
    if (!(is >> v) || !is.eof()) throw ParseError("override value is not a number: " + assignment);
    auto& n = s.numerics;
    if (key == "rtol") n.rtol = v;
    else if (key == "atol") n.atol = v;
    else if (key == "pullback_T") n.pullback_T = v;
    else if (key == "pullback_tol") n.pullback_tol = v;
    else if (key == "grid_n") {
        if (v != std::floor(v)) throw ParseError("numerics.grid_n must be an integer");
        n.grid_n = static_cast<int>(v);
    }
    else if (key == "birkhoff_T") n.birkhoff_T = v;
    else if (key == "sep_tol") n.sep_tol = v;
    else if (key == "pinch_tol") n.pinch_tol = v;
    else if (key == "exp_margin") n.exp_margin = v;
    else if (key == "bisect_tol") n.bisect_tol = v;
    else throw ParseError("overrides only touch numerics keys, got \"" + key + "\"");
    n.validate();
}

Scenario shift_quadratic(const Scenario& s, double xi) {
    if (s.rhs.shape != RhsShape::CubicPoly) throw DomainError("quadratic shift needs a cubic rhs");
    Scenario out = s;
    out.rhs.coeffs[2].mean += xi;
    return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<BasePoint> scan_points(std::size_t dim, std::size_t n) {
    if (dim == 0) return {BasePoint{}};
    // R_d sequence: alpha_i = phi_d^-i with phi_d the positive root of x^(d+1) = x + 1.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dim + 1));
    std::vector<double> alpha(dim);
    for (std::size_t i = 0; i < dim; ++i) alpha[i] = std::pow(1.0 / phi, static_cast<double>(i + 1));
    std::vector<BasePoint> pts(n, BasePoint{std::vector<double>(dim)});
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < dim; ++i) pts[k].theta[i] = wrap_unit(static_cast<double>(k) * alpha[i]);
    return pts;
}

SignCheck check_negative(const TrigPoly& p, std::size_t dim, bool strict) {
    SignCheck out;
    const double ub = p.upper_bound();
    if (strict ? ub < 0.0 : ub <= 0.0) {
        out.decided_by = "l1-bound";
        out.extremum = ub;
        return out;
    }
    out.decided_by = "grid-scan";
    out.extremum = -std::numeric_limits<double>::infinity();
    for (const auto& pt : scan_points(dim)) {
        const double v = p(pt);
        if (v > out.extremum) {
            out.extremum = v;
            out.witness = pt;
        }
    }
    const bool holds = strict ? out.extremum < 0.0 : out.extremum <= 0.0;
    out.verdict = holds ? SignVerdict::Holds : SignVerdict::Fails;
    if (holds) out.witness.reset();
    return out;
}

SignCheck check_nonnegative(const TrigPoly& p, std::size_t dim) {
    TrigPoly neg = p;
    neg.mean = -neg.mean;
    for (auto& h : neg.harmonics) h.amplitude = -h.amplitude;
    SignCheck c = check_negative(neg, dim, false);
    c.extremum = -c.extremum;
    return c;
}

bool ValidationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool ValidationReport::passed(const std::string& name) const {
    const auto* c = find(name);
    return c != nullptr && c->passed;
}

ValidationReport validate_model(const Scenario& s) {
    ValidationReport rep;
    const std::size_t dim = s.base.dim();
    auto from_sign = [](std::string name, const SignCheck& sc, std::string what) {
        ValidationCheck c;
        c.name = std::move(name);
        c.passed = sc.verdict == SignVerdict::Holds;
        c.decided_by = sc.decided_by;
        c.witness_omega = sc.witness;
        std::ostringstream os;
        os.precision(17);
        os << what << " (worst value " << sc.extremum << ")";
        c.detail = os.str();
        return c;
    };

    if (s.rhs.shape == RhsShape::CubicPoly) {
        const auto& c3 = s.rhs.coeffs[3];
        rep.checks.push_back(from_sign("coercive", check_negative(c3, dim, true), "c3 < 0 uniformly"));
        rep.checks.push_back(from_sign("d-concave", check_negative(c3, dim, false), "f_xxx = 6 c3 <= 0"));
        if (s.family == Family::Linear) {
            ValidationCheck z;
            z.name = "zero-at-zero";
            z.decided_by = "structural";
            z.passed = s.rhs.coeffs[0].is_zero();
            z.detail = "c0 identically zero";
            if (!z.passed) {
                // c0 nonzero somewhere; pick the scan point where |c0| is largest
                double best = -1.0;
                for (const auto& pt : scan_points(dim)) {
                    const double v = std::abs(s.rhs.coeffs[0](pt));
                    if (v > best) {
                        best = v;
                        z.witness_omega = pt;
                    }
                }
                z.witness_x = 0.0;
            }
            rep.checks.push_back(std::move(z));
        }
    } else {
        const SignCheck w = check_nonnegative(s.rhs.halfwidth, dim);
        rep.checks.push_back(from_sign("halfwidth-nonnegative", w, "w >= 0"));
        ValidationCheck co{"coercive", true, "structural", std::nullopt, std::nullopt, "-(x -+ w)^3 outside the deadzone"};
        ValidationCheck dc{"d-concave", w.verdict == SignVerdict::Holds, "structural", w.witness, std::nullopt,
                           "f_x = -3 dist(x,[-w,w])^2 is concave"};
        rep.checks.push_back(std::move(co));
        rep.checks.push_back(std::move(dc));
        if (s.family == Family::Linear) {
            rep.checks.push_back(ValidationCheck{"zero-at-zero", w.verdict == SignVerdict::Holds, "structural",
                                                 w.witness, std::nullopt, "f(.,0) = 0 whenever w >= 0"});
        }
    }
    return rep;
}

void require_check(const Scenario& s, const std::string& name) {
    const auto rep = validate_model(s);
    const auto* c = rep.find(name);
    if (c == nullptr || !c->passed) throw ModelError("model check \"" + name + "\" failed");
}

}  // namespace snbif
