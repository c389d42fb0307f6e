#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snbif/equilibria.hpp"
#include "snbif/scenario.hpp"

namespace snbif {

enum class PointKind { SaddleNodeUpper, SaddleNodeLower, Transcritical, Pitchfork };

enum class DiagramClass {
    DoubleSaddleNode,
    SingleMinimalSet,
    GlobalPitchfork,
    TranscriticalPlusSaddleNode,
    WeakTranscritical,
    Undetermined
};

std::string to_string(PointKind k);
std::string to_string(DiagramClass c);

struct BifurcationPoint {
    double location = 0.0;
    double width = 0.0;
    PointKind kind = PointKind::SaddleNodeUpper;
    bool degraded = false;
};

struct LocateResult {
    double location = 0.0;
    double width = 0.0;
    bool degraded = false;
};

using CensusPredicate = std::function<bool(const MinimalSetReport&)>;

/// Bisects [lo, hi] on a census predicate to width bisect_tol; every probe is a
/// full census. A degraded midpoint is retried at the golden points of the
/// bracket before the best bracket is returned with the degraded flag.
/// Throws DomainError when the predicate agrees at both ends.
LocateResult locate_bifurcation(const Scenario& s, double lo, double hi, const CensusPredicate& predicate);

enum class SpectrumObservable { A2Coefficient, FxAtZeroSection };

std::string to_string(SpectrumObservable o);

struct SpectrumSample {
    double horizon = 0.0;
    double low = 0.0;
    double high = 0.0;
};

struct SpectrumEstimate {
    double low = 0.0;
    double high = 0.0;
    double horizon = 0.0;
    std::vector<SpectrumSample> spread_history;
};

/// Min and max of finite-time averages over 64 spread base points, per horizon;
/// the last horizon gives the estimate.
SpectrumEstimate estimate_spectrum(const Scenario& s, SpectrumObservable observable,
                                   const std::vector<double>& horizons);

struct BifurcationDiagram {
    Family family = Family::Additive;
    std::string parameter = "lambda";
    std::vector<MinimalSetReport> rows;
    std::vector<BifurcationPoint> points;  ///< sorted by location
    DiagramClass classification = DiagramClass::Undetermined;
    /// Linear family: where the zero-section exponent changes sign.
    std::optional<double> zero_crossing;
    /// Linear family: parameter window [-high, -low] from the spectrum of F_x on the zero section.
    std::optional<std::pair<double, double>> zero_window;
    std::optional<std::string> sweep_verdict;
    std::optional<std::string> spectrum_verdict;
    std::vector<std::string> degraded;
};

/// Census over the sweep grid, transitions located, diagram classified.
BifurcationDiagram sweep(const Scenario& s, int threads = 0);

struct Classification {
    DiagramClass value = DiagramClass::Undetermined;
    std::optional<std::string> sweep_verdict;
    std::optional<std::string> spectrum_verdict;
};

/// Applies the classification rules to a diagram whose rows, points and zero
/// crossing are filled in.
Classification classify(const Scenario& s, const BifurcationDiagram& diagram);

/// True for the showcase x' = -x^3 + a2 x^2 + lambda x: Linear, cubic, c0 = c1 = 0, c3 a negative constant.
bool is_quadratic_showcase(const Scenario& s);

/// Spectrum rule on a2: GlobalPitchfork when the spectrum contains 0, else TranscriticalPlusSaddleNode.
DiagramClass spectrum_rule(const SpectrumEstimate& a2_spectrum);

/// Sweeps x' = -x^3 + (a2 + xi) x^2 (lambda = 0) over xi in [xi_min, xi_max].
/// Rows carry xi in their lambda slot.
BifurcationDiagram sweep_quadratic_shift(const Scenario& s, double xi_min, double xi_max, int steps,
                                         int threads = 0);

}  // namespace snbif
