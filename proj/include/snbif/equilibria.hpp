#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snbif/base_flow.hpp"
#include "snbif/scenario.hpp"

namespace snbif {

enum class Side { Lower, Upper };
enum class Track { Alpha, Beta, Kappa };
enum class Hyperbolicity { Attractive, Repulsive, NonhyperbolicEvidence };

std::string to_string(Side side);
std::string to_string(Track track);
std::string to_string(Hyperbolicity h);

/// R such that F(., x) > 0 for x <= -R and F(., x) < 0 for x >= R, or nullopt
/// when the leading coefficient is not uniformly negative.
std::optional<double> coercive_radius(const Scenario& s, double lambda);

/// (rho1, rho2) = (-R, R). Throws ModelError when the model is not coercive.
std::pair<double, double> bracketing_bounds(const Scenario& s, double lambda);

struct PullbackResult {
    double value = 0.0;
    double horizon = 0.0;
};

/// alpha(omega) or beta(omega) as a pullback limit with horizon doubling.
/// Throws NonConvergence when the horizon cap is reached first.
PullbackResult pullback_equilibrium(const Scenario& s, double lambda, const BasePoint& omega, Side side);

/// Pullback values along one base orbit, at omega . t_k for ascending times t_k.
struct OrbitPullback {
    std::vector<double> values;
    std::vector<double> previous;  ///< values at the preceding horizon
    double horizon = 0.0;
    bool converged = false;
    double monotone_defect = 0.0;  ///< largest step against the expected direction
};

OrbitPullback pullback_orbit(const Scenario& s, double lambda, const BasePoint& omega,
                             const std::vector<double>& times, Side side);

/// Largest horizon tried before giving up.
double pullback_cap(const Scenario& s);

/// Basin boundary between the lower and upper attracting trajectories through
/// alpha and beta at omega, to width 1e-10; nullopt when there is none.
std::optional<double> bisect_repeller(const Scenario& s, double lambda, const BasePoint& omega, double alpha,
                                      double beta);

/// Time average of F_x along the tracked invariant graph over birkhoff_T.
double lyapunov_exponent(const Scenario& s, double lambda, const BasePoint& omega, Track track);

/// Birkhoff average of F_x(., 0) from omega; the exponent of the zero section.
double zero_section_exponent(const Scenario& s, double lambda, const BasePoint& omega);

Hyperbolicity classify_exponent(double gamma, double margin);

struct EquilibriumSample {
    double lambda = 0.0;
    std::vector<BasePoint> grid;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::optional<std::vector<double>> kappa;
    std::optional<double> gamma_alpha;
    std::optional<double> gamma_beta;
    std::optional<double> gamma_kappa;
    double pullback_horizon_used = 0.0;
};

struct SetSummary {
    std::string role;  ///< "single", "lower", "middle", "upper"
    std::optional<double> exponent;
    Hyperbolicity hyperbolicity = Hyperbolicity::NonhyperbolicEvidence;
};

struct MinimalSetReport {
    double lambda = 0.0;
    int count = 1;
    std::vector<SetSummary> sets;  ///< bottom to top
    bool pinched = false;
    double gap_min = 0.0;
    double gap_max = 0.0;
    EquilibriumSample sample;
    /// Linear family: exponent of the zero section and which signed branches exist.
    std::optional<double> gamma_zero;
    bool lower_branch = false;
    bool upper_branch = false;
    bool degraded = false;
    std::vector<std::string> notes;
};

MinimalSetReport census(const Scenario& s, double lambda);

}  // namespace snbif
