#pragma once

#include <string>

#include <json.hpp>

#include "snbif/bifurcation.hpp"
#include "snbif/dconcavity.hpp"
#include "snbif/equilibria.hpp"
#include "snbif/integrator.hpp"
#include "snbif/scenario.hpp"

namespace snbif {

/// "%.17g"; empty for NaN so missing values never masquerade as numbers.
std::string format_double(double v);

nlohmann::json to_json(const BasePoint& p);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const OdeSolution& s);
nlohmann::json to_json(const MinimalSetReport& r, bool with_grid = true);
nlohmann::json to_json(const SpectrumEstimate& e);
nlohmann::json to_json(const SdcReport& r);
/// Summary of a diagram: rows without per-grid data, points, classification, degraded list.
nlohmann::json to_json(const BifurcationDiagram& d);

inline constexpr const char* kCsvHeader =
    "lambda,count,pinched,alpha_mean,kappa_mean,beta_mean,gamma_alpha,gamma_kappa,gamma_beta,gap_min,gap_max,horizon";

/// One line per row under kCsvHeader.
std::string diagram_csv(const BifurcationDiagram& d);

}  // namespace snbif
