#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snbif/base_flow.hpp"
#include "snbif/model.hpp"

namespace snbif {

/// Additive: x' = f + lambda. Linear: x' = f + lambda x (requires f(., 0) = 0).
enum class Family { Additive, Linear };

std::string to_string(Family family);

struct SweepRange {
    double lambda_min = -1.0;
    double lambda_max = 1.0;
    int steps = 101;

    double at(int i) const;

    bool operator==(const SweepRange&) const = default;
};

struct NumericsConfig {
    double rtol = 1e-9;
    double atol = 1e-12;
    double pullback_T = 64.0;
    double pullback_tol = 1e-9;
    int grid_n = 256;
    double birkhoff_T = 1e4;
    double sep_tol = 1e-3;
    double pinch_tol = 1e-6;
    double exp_margin = 1e-3;
    double bisect_tol = 1e-6;

    /// Throws ParseError on non-positive tolerances or pinch_tol >= sep_tol.
    void validate() const;
    rk::Control control() const;

    bool operator==(const NumericsConfig&) const = default;
};

struct Scenario {
    BaseFlowSpec base;
    RhsModel rhs;
    Family family = Family::Additive;
    SweepRange sweep;
    NumericsConfig numerics;

    bool operator==(const Scenario&) const = default;
};

/// Parses scenario JSON text. Omitted numerics take defaults; unknown keys,
/// missing required fields, type mismatches and invariant violations throw ParseError.
Scenario parse_scenario(const std::string& text);

/// Canonical serialisation; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

/// Applies "key=value" overrides to numerics keys only.
void apply_numerics_override(Scenario& s, const std::string& assignment);

/// Shifts the mean of c2 by xi: the family x' = -x^3 + (a2 + xi) x^2 is swept this way.
Scenario shift_quadratic(const Scenario& s, double xi);

// ---------------------------------------------------------------------------
// Model validation

enum class SignVerdict { Holds, Fails };

/// Result of a uniform-sign check on a trig polynomial.
struct SignCheck {
    SignVerdict verdict = SignVerdict::Holds;
    std::string decided_by;  ///< "l1-bound", "grid-scan" or "structural"
    std::optional<BasePoint> witness;
    double extremum = 0.0;  ///< worst value seen (bound or scan)
};

/// Checks p(theta) < 0 (strict) or p(theta) <= 0 on the d-torus: the l1 bound
/// first, then a 4096-point scan that also yields a witness.
SignCheck check_negative(const TrigPoly& p, std::size_t dim, bool strict);
/// Checks p(theta) >= 0 on the d-torus.
SignCheck check_nonnegative(const TrigPoly& p, std::size_t dim);

/// The 4096-point scan set: the origin plus an R_d low-discrepancy sequence.
std::vector<BasePoint> scan_points(std::size_t dim, std::size_t n = 4096);

struct ValidationCheck {
    std::string name;  ///< "coercive", "d-concave", "zero-at-zero", "halfwidth-nonnegative"
    bool passed = true;
    std::string decided_by;
    std::optional<BasePoint> witness_omega;
    std::optional<double> witness_x;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool all_passed() const;
    bool passed(const std::string& name) const;
    const ValidationCheck* find(const std::string& name) const;
};

ValidationReport validate_model(const Scenario& s);

/// Throws ModelError unless the named check passes.
void require_check(const Scenario& s, const std::string& name);

}  // namespace snbif
