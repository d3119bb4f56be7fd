#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nonrecip/model.hpp"

namespace nonrecip::cli {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { Linearized, SelfConsistent };

struct GridSpec {
  double x_min = -2;
  double x_max = 2;
  std::size_t n_points = 2001;
};

struct OracleOptions {
  bool rwa = true;
  bool full = false;
  bool omega_m_scan = false;
  std::vector<double> omega_m_factors{25, 50, 100, 200}; // omega_m / kappa
  double omega_m_factor = 200; // used when a linearized block is lifted to a physical system
  double g0 = 1e-3;
  double t_end = 0; // 0 selects the settling time of the rotating-wave system
  double window = 0.25;
  std::string trajectory_out;
};

/// One run of sweep / oracle / steady. Exactly one parameter block is set,
/// matching the mode.
struct RunConfig {
  RunMode mode = RunMode::Linearized;
  std::optional<LinearizedSystemd> linearized;
  std::optional<SystemParamsd> physical;
  GridSpec grid;
  ProbeSpecd probe{1.0, 0.0, 0.0};
  std::string out;
  OracleOptions oracle;
};

/// Command-line values that take precedence over the config document.
struct Overrides {
  std::optional<double> kappa, gamma, G, J;
  std::optional<std::string> theta;
  std::optional<double> x_min, x_max, x;
  std::optional<std::size_t> n_points;
  std::optional<std::string> out;
};

nlohmann::json load_json_file(const std::string &path);

/// Writes the overrides into the document (creating the linearized block
/// when needed) so that parsing sees a single merged source.
void apply_overrides(nlohmann::json &doc, const Overrides &o);

RunConfig parse_run_config(const nlohmann::json &doc);

} // namespace nonrecip::cli
