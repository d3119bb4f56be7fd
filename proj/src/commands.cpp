#include "nonrecip/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nonrecip/cli/io.hpp"
#include "nonrecip/conditions.hpp"
#include "nonrecip/oracle.hpp"
#include "nonrecip/steady_state.hpp"

namespace nonrecip::cli {

using nlohmann::json;

namespace {

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json amplitudes_json(const ResponseAmplitudesd &r) {
  return {{"b_plus", complex_json(r.b_plus)},
          {"c1_plus", complex_json(r.c1_plus)},
          {"c2_plus", complex_json(r.c2_plus)}};
}

json linearized_json(const LinearizedSystemd &lin) {
  return {{"G", lin.G}, {"theta", lin.theta}, {"J", lin.J}, {"kappa", lin.kappa},
          {"gamma", lin.gamma}};
}

json direction_summary(const std::vector<ScatteringPointd> &points, Direction d) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].T(d) > points[imax].T(d))
      imax = i;
  json out = {{"max_T", points[imax].T(d)}, {"argmax_x", points[imax].x}};
  const auto w = fwhm(points, d);
  out["fwhm"] = w ? json(w->width) : json(nullptr);
  return out;
}

// Unit-probe responses and transmission from one oracle route.
struct Route {
  ResponseAmplitudesd left, right;
  ScatteringPointd scattering;
};

ResponseAmplitudesd superpose(const ProbeSpecd &probe, const ResponseAmplitudesd &l,
                              const ResponseAmplitudesd &r) {
  return {probe.eps_L * l.b_plus + probe.eps_R * r.b_plus,
          probe.eps_L * l.c1_plus + probe.eps_R * r.c1_plus,
          probe.eps_L * l.c2_plus + probe.eps_R * r.c2_plus};
}

json route_json(const Route &route, const ProbeSpecd &probe) {
  return {{"t_LR", complex_json(route.scattering.t_LR)},
          {"t_RL", complex_json(route.scattering.t_RL)},
          {"T_LR", route.scattering.T_LR},
          {"T_RL", route.scattering.T_RL},
          {"amplitudes", amplitudes_json(superpose(probe, route.left, route.right))}};
}

// Physical system and steady state behind a run; built on the red sideband
// when the config only carries a reduced model.
std::pair<SystemParamsd, SteadyStated> physical_system(const RunConfig &cfg,
                                                       const LinearizedSystemd &lin) {
  const SystemParamsd params =
      cfg.physical ? *cfg.physical
                   : red_sideband_params(lin, cfg.oracle.omega_m_factor * lin.kappa,
                                         cfg.oracle.g0);
  return {params, solve_steady_state(params)};
}

GeneralLinearizedSystemd general_system(const RunConfig &cfg, const LinearizedSystemd &lin) {
  if (!cfg.physical)
    return GeneralLinearizedSystemd::from(lin);
  // Keep the raw couplings of the physical system, rotated into the gauge
  // where G1 is real positive.
  const auto &p = *cfg.physical;
  const auto steady = solve_steady_state(p);
  const auto gauge = std::polar(1.0, -std::arg(steady.c1_s));
  return {p.g0 * steady.c1_s * gauge, p.g0 * steady.c2_s * gauge, p.kappa1, p.kappa2,
          p.gamma, p.J};
}

std::string sweep_csv(const std::vector<ScatteringPointd> &points) {
  std::ostringstream os;
  write_sweep_csv(os, points);
  return os.str();
}

} // namespace

LinearizedSystemd resolve_linearized(const RunConfig &cfg) {
  if (cfg.linearized)
    return *cfg.linearized;
  const auto steady = solve_steady_state(*cfg.physical);
  return linearized_from_steady(*cfg.physical, steady);
}

json summarize_sweep(const std::vector<ScatteringPointd> &points) {
  if (points.empty())
    return {{"n_points", 0}};
  return {{"n_points", points.size()},
          {"x_min", points.front().x},
          {"x_max", points.back().x},
          {"L_to_R", direction_summary(points, Direction::L_to_R)},
          {"R_to_L", direction_summary(points, Direction::R_to_L)}};
}

SweepResult run_sweep(const RunConfig &cfg) {
  const auto lin = resolve_linearized(cfg);
  SweepResult r;
  r.points = sweep(lin, cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points);
  r.summary = summarize_sweep(r.points);
  return r;
}

json conditions_report(double kappa, double gamma, double theta) {
  const auto c = perfect_conditions(kappa, gamma, theta);
  if (!c)
    return {{"result", "none"}};
  return {{"branch", to_string(c->branch)},
          {"x", c->x_star},
          {"J", c->J_star},
          {"G", c->G_star},
          {"direction", to_string(c->direction)}};
}

json steady_report(const RunConfig &cfg) {
  if (!cfg.physical)
    throw ConfigError("steady requires a physical block");
  const auto &p = *cfg.physical;
  const auto s = solve_steady_state(p);
  json out = {{"b_s", complex_json(s.b_s)},
              {"c1_s", complex_json(s.c1_s)},
              {"c2_s", complex_json(s.c2_s)},
              {"delta1", s.delta1},
              {"delta2", s.delta2},
              {"residual", steady_residual(p, s)}};
  try {
    out["linearized"] = linearized_json(linearized_from_steady(p, s));
  } catch (const Error &e) {
    out["linearized"] = nullptr;
    out["linearized_error"] = e.what();
  }
  return out;
}

json oracle_report(const RunConfig &cfg) {
  const auto lin = resolve_linearized(cfg);
  const auto general = general_system(cfg, lin);
  const auto &probe = cfg.probe;
  const double x = probe.x;
  const auto &opt = cfg.oracle;

  json report;
  report["x"] = x;
  report["linearized"] = linearized_json(lin);

  std::vector<std::pair<std::string, ScatteringPointd>> routes;

  Route closed{response_amplitudes(lin, ProbeSpecd::left(x)),
               response_amplitudes(lin, ProbeSpecd::right(x)), scattering_point(lin, x)};
  report["closed_form"] = route_json(closed, probe);
  routes.emplace_back("closed_form", closed.scattering);

  Route solved{linsolve_response(general, ProbeSpecd::left(x)),
               linsolve_response(general, ProbeSpecd::right(x)), {}};
  solved.scattering = transmission_from_responses(general, x, solved.left, solved.right);
  report["linsolve"] = route_json(solved, probe);
  routes.emplace_back("linsolve", solved.scattering);

  const double t_end = opt.t_end > 0 ? opt.t_end : settling_time(general);
  const double fastest = std::max({general.kappa1, general.kappa2, general.gamma,
                                   std::abs(general.G1c), std::abs(general.G2c), general.J,
                                   std::abs(x)});
  report["t_end"] = t_end;

  if (opt.rwa) {
    const double dt = 0.02 / fastest;
    Route rwa{demodulate(integrate_rwa(general, ProbeSpecd::left(x), t_end, dt), x, opt.window)
                  .as_response(),
              demodulate(integrate_rwa(general, ProbeSpecd::right(x), t_end, dt), x, opt.window)
                  .as_response(),
              {}};
    rwa.scattering = transmission_from_responses(general, x, rwa.left, rwa.right);
    report["timedomain_rwa"] = route_json(rwa, probe);
    routes.emplace_back("timedomain_rwa", rwa.scattering);
    if (!opt.trajectory_out.empty()) {
      std::ofstream os(opt.trajectory_out);
      if (!os)
        throw ConfigError("cannot write trajectory to '" + opt.trajectory_out + "'");
      write_trajectory_csv(os, integrate_rwa(general, probe, t_end, dt));
    }
  }

  if (opt.full) {
    const auto [params, steady] = physical_system(cfg, lin);
    const double dt = std::min(0.02 / params.omega_m, 0.02 / fastest);
    GeneralLinearizedSystemd ports;
    ports.kappa1 = params.kappa1;
    ports.kappa2 = params.kappa2;
    Route full{
        demodulate(integrate_full(params, steady, ProbeSpecd::left(x), t_end, dt), x, opt.window)
            .as_response(),
        demodulate(integrate_full(params, steady, ProbeSpecd::right(x), t_end, dt), x,
                   opt.window)
            .as_response(),
        {}};
    full.scattering = transmission_from_responses(ports, x, full.left, full.right);
    report["timedomain_full"] = route_json(full, probe);
    report["timedomain_full"]["omega_m"] = params.omega_m;
    routes.emplace_back("timedomain_full", full.scattering);
  }

  json deviations = json::object();
  for (std::size_t i = 0; i < routes.size(); ++i)
    for (std::size_t j = i + 1; j < routes.size(); ++j)
      deviations[routes[i].first + "_vs_" + routes[j].first] =
          transmission_deviation(routes[j].second, routes[i].second);
  report["deviations"] = deviations;

  if (opt.omega_m_scan) {
    const auto devs = rwa_deviation_scan(lin, opt.omega_m_factors, opt.g0, x, t_end, opt.window);
    json scan = json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < devs.size(); ++i) {
      scan.push_back({{"omega_m_over_kappa", opt.omega_m_factors[i]}, {"deviation", devs[i]}});
      if (i > 0 && !(devs[i] < devs[i - 1]))
        decreasing = false;
    }
    report["omega_m_scan"] = {{"points", scan}, {"strictly_decreasing", decreasing}};
  }
  return report;
}

const std::vector<std::string> &figure_ids() {
  static const std::vector<std::string> ids{"fig2a", "fig2b", "fig2c", "fig2d", "fig3",
                                            "fig4a", "fig4b", "fig4c", "fig4d"};
  return ids;
}

std::vector<FigureTable> figure_tables(std::string_view id) {
  constexpr double pi = std::numbers::pi;
  if (id == "all") {
    std::vector<FigureTable> all;
    for (const auto &f : figure_ids())
      for (auto &t : figure_tables(f))
        all.push_back(std::move(t));
    return all;
  }
  // Transmission vs x/kappa at the theta = -pi/2 perfect point, kappa = 1.
  static const std::pair<std::string_view, double> fig2[] = {
      {"fig2a", 2.0}, {"fig2b", 1.0}, {"fig2c", 0.2}, {"fig2d", 0.01}};
  for (const auto &[name, gamma] : fig2) {
    if (id != name)
      continue;
    const auto c = *perfect_conditions(1.0, gamma, -pi / 2);
    return {{std::string(name), sweep_csv(sweep(c.system(1.0, gamma, -pi / 2), -2.0, 2.0, 2001))}};
  }
  // Transmission vs x/gamma on the equal-damping branch, kappa = gamma = 1.
  static const std::pair<std::string_view, double> fig4[] = {
      {"fig4a", -3 * pi / 4}, {"fig4b", -pi / 4}, {"fig4c", pi / 4}, {"fig4d", 3 * pi / 4}};
  for (const auto &[name, theta] : fig4) {
    if (id != name)
      continue;
    const auto c = *perfect_conditions(1.0, 1.0, theta);
    return {{std::string(name), sweep_csv(sweep(c.system(1.0, 1.0, theta), -5.0, 5.0, 1001))}};
  }
  if (id == "fig3") {
    // theta = k pi / 200 on (-pi, pi), skipping the pole at theta = 0.
    std::ostringstream os;
    os << kFig3Header << '\n';
    for (int k = -199; k <= 199; ++k) {
      if (k == 0)
        continue;
      const double theta = k * pi / 200;
      const auto c = *perfect_conditions(1.0, 1.0, theta);
      os << format_double(theta) << ',' << format_double(c.G_star) << ','
         << format_double(c.x_star) << '\n';
    }
    return {{"fig3", os.str()}};
  }
  throw ConfigError("unknown figure id '" + std::string(id) + "'");
}

} // namespace nonrecip::cli
