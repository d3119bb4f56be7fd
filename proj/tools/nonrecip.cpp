// nonrecip: transmission spectra, perfect-nonreciprocity conditions, figure
// data and oracle cross-checks for the double-cavity optomechanical isolator.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nonrecip/cli/angle.hpp"
#include "nonrecip/cli/commands.hpp"
#include "nonrecip/cli/config.hpp"
#include "nonrecip/cli/io.hpp"
#include "nonrecip/error.hpp"

namespace {

using nlohmann::json;
using namespace nonrecip::cli;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

// "--theta -pi/2" would otherwise be read as a short flag; glue values that
// start with '-' onto their option.
std::vector<std::string> glue_negative_values(int argc, char **argv) {
  static const std::set<std::string> valued{"--theta", "--kappa", "--gamma", "--G",
                                            "--J",     "--x-min", "--x-max", "--x"};
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (valued.count(args[i]) && i + 1 < args.size() && !args[i + 1].empty() &&
        args[i + 1][0] == '-' && args[i + 1].rfind("--", 0) != 0) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

void emit_json(const json &j, bool quiet) {
  if (!quiet)
    std::cout << j.dump(2) << '\n';
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ConfigError("cannot write '" + path + "'");
  os << text;
  if (!os)
    throw ConfigError("write failed for '" + path + "'");
}

struct CommonFlags {
  std::string config;
  std::string out;
  bool quiet = false;
};

struct LinFlags {
  std::string kappa, gamma, G, J, theta, x_min, x_max, x;
  std::size_t n_points = 0;
};

void add_common(CLI::App *cmd, CommonFlags &c) {
  cmd->add_option("--config", c.config, "JSON run configuration");
  cmd->add_option("--out", c.out, "Output path");
  cmd->add_flag("--quiet", c.quiet, "Suppress JSON on standard output");
}

void add_linearized_flags(CLI::App *cmd, LinFlags &f) {
  cmd->add_option("--kappa", f.kappa, "Cavity decay rate");
  cmd->add_option("--gamma", f.gamma, "Mechanical decay rate");
  cmd->add_option("--G", f.G, "Effective optomechanical coupling");
  cmd->add_option("--J", f.J, "Cavity tunnelling rate");
  cmd->add_option("--theta", f.theta, "Coupling phase, e.g. -pi/2 or 0.785");
}

double parse_real(const std::string &s, const char *name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw ConfigError(std::string("--") + name + " expects a number, got '" + s + "'");
  }
}

Overrides to_overrides(const CommonFlags &c, const LinFlags &f) {
  Overrides o;
  if (!f.kappa.empty()) o.kappa = parse_real(f.kappa, "kappa");
  if (!f.gamma.empty()) o.gamma = parse_real(f.gamma, "gamma");
  if (!f.G.empty()) o.G = parse_real(f.G, "G");
  if (!f.J.empty()) o.J = parse_real(f.J, "J");
  if (!f.theta.empty()) {
    try {
      parse_angle(f.theta);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
    o.theta = f.theta;
  }
  if (!f.x_min.empty()) o.x_min = parse_real(f.x_min, "x-min");
  if (!f.x_max.empty()) o.x_max = parse_real(f.x_max, "x-max");
  if (!f.x.empty()) o.x = parse_real(f.x, "x");
  if (f.n_points) o.n_points = f.n_points;
  if (!c.out.empty()) o.out = c.out;
  return o;
}

RunConfig load_config(const CommonFlags &c, const LinFlags &f) {
  json doc = c.config.empty() ? json::object() : load_json_file(c.config);
  apply_overrides(doc, to_overrides(c, f));
  return parse_run_config(doc);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Optical nonreciprocity in a double-cavity optomechanical system"};
  app.require_subcommand(1);

  CommonFlags sweep_c, cond_c, fig_c, oracle_c, steady_c;
  LinFlags sweep_f, cond_f, oracle_f, steady_f;

  auto *sweep_cmd = app.add_subcommand("sweep", "Transmission spectrum over a detuning grid");
  add_common(sweep_cmd, sweep_c);
  add_linearized_flags(sweep_cmd, sweep_f);
  sweep_cmd->add_option("--x-min", sweep_f.x_min, "Lower detuning");
  sweep_cmd->add_option("--x-max", sweep_f.x_max, "Upper detuning");
  sweep_cmd->add_option("--n-points", sweep_f.n_points, "Grid size (>= 2)");

  auto *cond_cmd = app.add_subcommand("conditions", "Perfect-nonreciprocity point");
  add_common(cond_cmd, cond_c);
  add_linearized_flags(cond_cmd, cond_f);

  std::string figure_id;
  auto *fig_cmd = app.add_subcommand("figure", "Write figure data as CSV");
  add_common(fig_cmd, fig_c);
  fig_cmd->add_option("id", figure_id, "fig2a..fig2d, fig3, fig4a..fig4d or all")->required();

  bool oracle_full = false, oracle_scan = false;
  auto *oracle_cmd = app.add_subcommand("oracle", "Cross-check closed form against oracles");
  add_common(oracle_cmd, oracle_c);
  add_linearized_flags(oracle_cmd, oracle_f);
  oracle_cmd->add_option("--x", oracle_f.x, "Probe detuning");
  oracle_cmd->add_flag("--full", oracle_full, "Include the full (pre-RWA) equations");
  oracle_cmd->add_flag("--omega-m-scan", oracle_scan, "Scan RWA deviation over omega_m");

  auto *steady_cmd = app.add_subcommand("steady", "Self-consistent steady state");
  add_common(steady_cmd, steady_c);

  const auto args = glue_negative_values(argc, argv);
  std::vector<const char *> cargs;
  for (const auto &a : args)
    cargs.push_back(a.c_str());
  try {
    app.parse(int(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sweep_cmd) {
      const auto cfg = load_config(sweep_c, sweep_f);
      if (cfg.out.empty())
        throw ConfigError("sweep needs an output path (--out or \"out\" in the config)");
      const auto result = run_sweep(cfg);
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os)
        throw ConfigError("cannot write '" + cfg.out + "'");
      write_sweep_csv(os, result.points);
      emit_json(result.summary, sweep_c.quiet);
    } else if (*cond_cmd) {
      json doc = cond_c.config.empty() ? json::object() : load_json_file(cond_c.config);
      apply_overrides(doc, to_overrides(CommonFlags{}, cond_f));
      const json lin = doc.value("linearized", json::object());
      if (!lin.contains("kappa") || !lin.contains("gamma") || !lin.contains("theta"))
        throw ConfigError("conditions needs --kappa, --gamma and --theta");
      if (!lin["kappa"].is_number() || !lin["gamma"].is_number())
        throw ConfigError("kappa and gamma must be numbers");
      const double kappa = lin["kappa"].get<double>();
      const double gamma = lin["gamma"].get<double>();
      if (!(kappa > 0) || !(gamma > 0))
        throw ConfigError("kappa and gamma must be positive");
      double theta = 0;
      try {
        theta = lin["theta"].is_string() ? parse_angle(lin["theta"].get<std::string>())
                                         : lin["theta"].get<double>();
      } catch (const std::exception &e) {
        throw ConfigError(std::string("bad theta: ") + e.what());
      }
      const json report = conditions_report(kappa, gamma, theta);
      if (!cond_c.out.empty())
        write_text(cond_c.out, report.dump(2) + "\n");
      emit_json(report, cond_c.quiet);
    } else if (*fig_cmd) {
      const auto tables = figure_tables(figure_id);
      json written = json::array();
      for (const auto &t : tables) {
        std::string path;
        if (tables.size() == 1 && !fig_c.out.empty()) {
          path = fig_c.out;
        } else {
          const std::filesystem::path dir = fig_c.out.empty() ? "." : fig_c.out;
          std::filesystem::create_directories(dir);
          path = (dir / (t.name + ".csv")).string();
        }
        write_text(path, t.csv);
        written.push_back(path);
      }
      emit_json({{"written", written}}, fig_c.quiet);
    } else if (*oracle_cmd) {
      auto cfg = load_config(oracle_c, oracle_f);
      if (oracle_full)
        cfg.oracle.full = true;
      if (oracle_scan)
        cfg.oracle.omega_m_scan = true;
      const json report = oracle_report(cfg);
      if (!cfg.out.empty())
        write_text(cfg.out, report.dump(2) + "\n");
      emit_json(report, oracle_c.quiet);
    } else if (*steady_cmd) {
      const auto cfg = load_config(steady_c, steady_f);
      const json report = steady_report(cfg);
      if (!cfg.out.empty())
        write_text(cfg.out, report.dump(2) + "\n");
      emit_json(report, steady_c.quiet);
    }
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nonrecip::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
