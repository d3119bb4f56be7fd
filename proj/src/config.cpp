#include "nonrecip/cli/config.hpp"

#include <fstream>
#include <set>

#include "nonrecip/cli/angle.hpp"
#include "nonrecip/error.hpp"

namespace nonrecip::cli {

using nlohmann::json;

namespace {

void check_keys(const json &obj, const std::string &where,
                const std::set<std::string> &allowed) {
  if (!obj.is_object())
    throw ConfigError(where + " must be an object");
  for (const auto &[key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_number(const json &obj, const std::string &key, const std::string &where) {
  if (!obj.contains(key))
    throw ConfigError("missing '" + key + "' in " + where);
  const auto &v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

double get_number_or(const json &obj, const std::string &key, double fallback,
                     const std::string &where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

bool get_bool_or(const json &obj, const std::string &key, bool fallback) {
  if (!obj.contains(key))
    return fallback;
  if (!obj.at(key).is_boolean())
    throw ConfigError("'" + key + "' must be true or false");
  return obj.at(key).get<bool>();
}

double get_angle(const json &v) {
  if (v.is_number())
    return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_angle(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("theta must be a number or a pi expression string");
}

// Complex values: a number, [re, im], or {"re": .., "im": ..}.
std::complex<double> get_complex(const json &v, const std::string &what) {
  if (v.is_number())
    return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re") && v.contains("im") && v["re"].is_number() &&
      v["im"].is_number())
    return {v["re"].get<double>(), v["im"].get<double>()};
  throw ConfigError(what + " must be a number, [re, im] or {re, im}");
}

LinearizedSystemd parse_linearized(const json &b) {
  const std::string where = "linearized block";
  check_keys(b, where, {"kappa", "gamma", "G", "J", "theta"});
  if (!b.contains("theta"))
    throw ConfigError("missing 'theta' in " + where);
  try {
    return make_linearized(get_number(b, "G", where), get_angle(b.at("theta")),
                           get_number(b, "J", where), get_number(b, "kappa", where),
                           get_number(b, "gamma", where));
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
}

SystemParamsd parse_physical(const json &b) {
  const std::string where = "physical block";
  check_keys(b, where,
             {"kappa1", "kappa2", "gamma", "omega_m", "g0", "J", "delta_c", "eps_c", "eps_d"});
  for (const char *k : {"eps_c", "eps_d"})
    if (!b.contains(k))
      throw ConfigError(std::string("missing '") + k + "' in " + where);
  try {
    return make_system_params(get_number(b, "kappa1", where), get_number(b, "kappa2", where),
                              get_number(b, "gamma", where), get_number(b, "omega_m", where),
                              get_number(b, "g0", where), get_number(b, "J", where),
                              get_number(b, "delta_c", where),
                              get_complex(b.at("eps_c"), "eps_c"),
                              get_complex(b.at("eps_d"), "eps_d"));
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
}

} // namespace

json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

void apply_overrides(json &doc, const Overrides &o) {
  if (doc.is_null())
    doc = json::object();
  if (!doc.is_object())
    throw ConfigError("config root must be an object");
  const bool touches_lin = o.kappa || o.gamma || o.G || o.J || o.theta;
  if (touches_lin) {
    json &lin = doc["linearized"];
    if (lin.is_null())
      lin = json::object();
    if (o.kappa) lin["kappa"] = *o.kappa;
    if (o.gamma) lin["gamma"] = *o.gamma;
    if (o.G) lin["G"] = *o.G;
    if (o.J) lin["J"] = *o.J;
    if (o.theta) lin["theta"] = *o.theta;
  }
  if (o.x_min || o.x_max || o.n_points) {
    json &grid = doc["grid"];
    if (grid.is_null())
      grid = json::object();
    if (o.x_min) grid["x_min"] = *o.x_min;
    if (o.x_max) grid["x_max"] = *o.x_max;
    if (o.n_points) grid["n_points"] = *o.n_points;
  }
  if (o.x) {
    json &probe = doc["probe"];
    if (probe.is_null())
      probe = json::object();
    probe["x"] = *o.x;
  }
  if (o.out)
    doc["out"] = *o.out;
}

RunConfig parse_run_config(const json &doc) {
  check_keys(doc, "config", {"mode", "linearized", "physical", "grid", "probe", "out", "oracle"});
  RunConfig cfg;

  const bool has_lin = doc.contains("linearized");
  const bool has_phys = doc.contains("physical");
  if (doc.contains("mode")) {
    const auto &m = doc.at("mode");
    if (m == "linearized")
      cfg.mode = RunMode::Linearized;
    else if (m == "selfconsistent")
      cfg.mode = RunMode::SelfConsistent;
    else
      throw ConfigError("mode must be \"linearized\" or \"selfconsistent\"");
  } else if (has_phys && !has_lin) {
    cfg.mode = RunMode::SelfConsistent;
  }
  if (has_lin == has_phys)
    throw ConfigError("exactly one of the linearized and physical blocks is required");
  if (cfg.mode == RunMode::Linearized) {
    if (!has_lin)
      throw ConfigError("mode linearized requires a linearized block");
    cfg.linearized = parse_linearized(doc.at("linearized"));
  } else {
    if (!has_phys)
      throw ConfigError("mode selfconsistent requires a physical block");
    cfg.physical = parse_physical(doc.at("physical"));
  }

  if (doc.contains("grid")) {
    const auto &g = doc.at("grid");
    check_keys(g, "grid", {"x_min", "x_max", "n_points"});
    cfg.grid.x_min = get_number_or(g, "x_min", cfg.grid.x_min, "grid");
    cfg.grid.x_max = get_number_or(g, "x_max", cfg.grid.x_max, "grid");
    if (g.contains("n_points")) {
      if (!g.at("n_points").is_number_integer() || g.at("n_points").get<long long>() < 2)
        throw ConfigError("grid.n_points must be an integer >= 2");
      cfg.grid.n_points = g.at("n_points").get<std::size_t>();
    }
  }
  if (!(cfg.grid.x_min < cfg.grid.x_max))
    throw ConfigError("grid.x_min must be < grid.x_max");

  if (doc.contains("probe")) {
    const auto &p = doc.at("probe");
    check_keys(p, "probe", {"eps_L", "eps_R", "x"});
    if (p.contains("eps_L"))
      cfg.probe.eps_L = get_complex(p.at("eps_L"), "eps_L");
    if (p.contains("eps_R"))
      cfg.probe.eps_R = get_complex(p.at("eps_R"), "eps_R");
    cfg.probe.x = get_number_or(p, "x", 0.0, "probe");
  }

  if (doc.contains("out")) {
    if (!doc.at("out").is_string())
      throw ConfigError("out must be a path string");
    cfg.out = doc.at("out").get<std::string>();
  }

  if (doc.contains("oracle")) {
    const auto &o = doc.at("oracle");
    check_keys(o, "oracle",
               {"rwa", "full", "omega_m_scan", "omega_m_factors", "omega_m_factor", "g0",
                "t_end", "window", "trajectory_out"});
    auto &opt = cfg.oracle;
    opt.rwa = get_bool_or(o, "rwa", opt.rwa);
    opt.full = get_bool_or(o, "full", opt.full);
    opt.omega_m_scan = get_bool_or(o, "omega_m_scan", opt.omega_m_scan);
    if (o.contains("omega_m_factors")) {
      const auto &f = o.at("omega_m_factors");
      if (!f.is_array() || f.empty())
        throw ConfigError("oracle.omega_m_factors must be a non-empty array");
      opt.omega_m_factors.clear();
      for (const auto &v : f) {
        if (!v.is_number() || !(v.get<double>() > 0))
          throw ConfigError("oracle.omega_m_factors entries must be positive numbers");
        opt.omega_m_factors.push_back(v.get<double>());
      }
    }
    opt.omega_m_factor = get_number_or(o, "omega_m_factor", opt.omega_m_factor, "oracle");
    opt.g0 = get_number_or(o, "g0", opt.g0, "oracle");
    opt.t_end = get_number_or(o, "t_end", opt.t_end, "oracle");
    opt.window = get_number_or(o, "window", opt.window, "oracle");
    if (o.contains("trajectory_out")) {
      if (!o.at("trajectory_out").is_string())
        throw ConfigError("oracle.trajectory_out must be a path string");
      opt.trajectory_out = o.at("trajectory_out").get<std::string>();
    }
    if (!(opt.omega_m_factor > 0) || !(opt.g0 > 0) || !(opt.t_end >= 0) ||
        !(opt.window > 0 && opt.window < 1))
      throw ConfigError("oracle options out of range");
  }
  return cfg;
}

} // namespace nonrecip::cli
