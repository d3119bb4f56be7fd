#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nonrecip/cli/config.hpp"
#include "nonrecip/response.hpp"

namespace nonrecip::cli {

/// Reduced model for a run: the linearized block directly, or the physical
/// block pushed through the steady-state solver and gauge reduction.
LinearizedSystemd resolve_linearized(const RunConfig &cfg);

/// Peak, peak location and FWHM per direction. A pure function of the
/// points, so recomputing it from a parsed CSV reproduces it exactly.
nlohmann::json summarize_sweep(const std::vector<ScatteringPointd> &points);

struct SweepResult {
  std::vector<ScatteringPointd> points;
  nlohmann::json summary;
};

SweepResult run_sweep(const RunConfig &cfg);

nlohmann::json conditions_report(double kappa, double gamma, double theta);

nlohmann::json steady_report(const RunConfig &cfg);

nlohmann::json oracle_report(const RunConfig &cfg);

struct FigureTable {
  std::string name; // file stem, e.g. "fig2b"
  std::string csv;
};

const std::vector<std::string> &figure_ids();

/// CSV tables for one figure id (fig2a..fig2d, fig3, fig4a..fig4d) or "all".
/// Throws ConfigError for an unknown id.
std::vector<FigureTable> figure_tables(std::string_view id);

} // namespace nonrecip::cli
