#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "canetoads/config.hpp"
#include "canetoads/errors.hpp"

namespace canetoads {

// Run configuration file format (INI):
//
//   [profile]  kind = linear | power_law | oscillating_log | tabulated
//              exponent = <p>                  (power_law, required)
//              theta = <θ0>, <θ1>, ...          (tabulated, required)
//              value = <D0>, <D1>, ...          (tabulated, required)
//              limit_exponent = <q>            (tabulated, optional)
//   [grid]     x_min, x_max, theta_max, n_x, n_theta
//   [region]   shape = half_plane_cap | polygon
//              x_right, theta_cap               (half_plane_cap)
//              vertices = x θ; x θ; ...         (polygon, required)
//   [run]      epsilon = <ε> | limit, t_final, cadence, cap, u0_ramp = smoothstep | cosine,
//              u0_width_cells, path_nodes, tol_zero_level, tol_scheme, tol_optimizer
//
// Only profile.kind is required; everything else defaults to RunConfig{}.

namespace detail {

inline double parse_real(const std::string& key, const std::string& text) {
  std::string s = text;
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key + ": '" + text + "' is not a decimal number");
  }
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ConfigError(key + ": must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_real(key, item));
  }
  return out;
}

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<double>& v, const char* sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += sep;
    s += fmt17(v[k]);
  }
  return s;
}

}  // namespace detail

/// Parses and validates a run configuration. Throws ConfigError naming the
/// offending key.
inline RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const std::map<std::string, std::set<std::string>> schema = {
      {"profile", {"kind", "exponent", "theta", "value", "limit_exponent"}},
      {"grid", {"x_min", "x_max", "theta_max", "n_x", "n_theta"}},
      {"region", {"shape", "x_right", "theta_cap", "vertices"}},
      {"run",
       {"epsilon", "t_final", "cadence", "cap", "u0_ramp", "u0_width_cells", "path_nodes",
        "tol_zero_level", "tol_scheme", "tol_optimizer"}}};
  for (const auto& [section, body] : tree) {
    const auto it = schema.find(section);
    if (it == schema.end()) {
      if (body.empty() && !body.data().empty()) throw ConfigError(section + ": key outside any section");
      throw ConfigError(section + ": unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };
  auto real = [&](const std::string& path, double fallback) {
    const auto v = get(path);
    return v ? detail::parse_real(path, *v) : fallback;
  };
  auto count = [&](const std::string& path, std::size_t fallback) {
    const auto v = get(path);
    return v ? detail::parse_count(path, *v) : fallback;
  };

  RunConfig cfg;

  const auto kind = get("profile.kind");
  if (!kind) throw ConfigError("profile.kind: missing required key");
  try {
    if (*kind == "linear") {
      cfg.profile = DiffusionProfile::linear();
    } else if (*kind == "oscillating_log") {
      cfg.profile = DiffusionProfile::oscillating_log();
    } else if (*kind == "power_law") {
      const auto p = get("profile.exponent");
      if (!p) throw ConfigError("profile.exponent: required for power_law");
      cfg.profile = DiffusionProfile::power_law(detail::parse_real("profile.exponent", *p));
    } else if (*kind == "tabulated") {
      const auto th = get("profile.theta");
      const auto va = get("profile.value");
      if (!th) throw ConfigError("profile.theta: required for tabulated");
      if (!va) throw ConfigError("profile.value: required for tabulated");
      std::optional<double> q;
      if (const auto le = get("profile.limit_exponent")) q = detail::parse_real("profile.limit_exponent", *le);
      cfg.profile = DiffusionProfile::tabulated(detail::parse_list("profile.theta", *th, ','),
                                                detail::parse_list("profile.value", *va, ','), q);
    } else {
      throw ConfigError("profile.kind: unknown kind '" + *kind + "'");
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }

  const HalfPlaneGrid dg = cfg.grid;
  cfg.grid = HalfPlaneGrid(real("grid.x_min", dg.x_min()), real("grid.x_max", dg.x_max()),
                           real("grid.theta_max", dg.theta_max()), count("grid.n_x", dg.n_x()),
                           count("grid.n_theta", dg.n_theta()));

  const std::string shape = get("region.shape").value_or("half_plane_cap");
  if (shape == "half_plane_cap") {
    if (get("region.vertices")) throw ConfigError("region.vertices: only valid for shape = polygon");
    cfg.region = ConvexRegion::half_plane_cap(real("region.x_right", cfg.region.x_right()),
                                              real("region.theta_cap", cfg.region.theta_cap()));
  } else if (shape == "polygon") {
    if (get("region.x_right") || get("region.theta_cap")) {
      throw ConfigError("region.x_right/theta_cap: only valid for shape = half_plane_cap");
    }
    const auto vs = get("region.vertices");
    if (!vs) throw ConfigError("region.vertices: required for polygon");
    std::vector<Point> pts;
    std::stringstream ss(*vs);
    std::string item;
    while (std::getline(ss, item, ';')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      std::vector<double> xy = detail::parse_list("region.vertices", item, ' ');
      if (xy.size() != 2) throw ConfigError("region.vertices: each vertex is 'x theta'");
      pts.push_back({xy[0], xy[1]});
    }
    cfg.region = ConvexRegion::polygon(pts);
  } else {
    throw ConfigError("region.shape: unknown shape '" + shape + "'");
  }

  if (const auto e = get("run.epsilon")) {
    if (*e == "limit") {
      cfg.epsilon.reset();
    } else {
      cfg.epsilon = detail::parse_real("run.epsilon", *e);
    }
  }
  cfg.t_final = real("run.t_final", cfg.t_final);
  cfg.cadence = real("run.cadence", cfg.cadence);
  cfg.cap = real("run.cap", cfg.cap);
  if (const auto r = get("run.u0_ramp")) {
    if (*r == "smoothstep") {
      cfg.u0_ramp = RampKind::Smoothstep;
    } else if (*r == "cosine") {
      cfg.u0_ramp = RampKind::Cosine;
    } else {
      throw ConfigError("run.u0_ramp: unknown ramp '" + *r + "'");
    }
  }
  cfg.u0_width_cells = real("run.u0_width_cells", cfg.u0_width_cells);
  cfg.path_nodes = count("run.path_nodes", cfg.path_nodes);
  cfg.tol.zero_level = real("run.tol_zero_level", cfg.tol.zero_level);
  cfg.tol.scheme = real("run.tol_scheme", cfg.tol.scheme);
  cfg.tol.optimizer = real("run.tol_optimizer", cfg.tol.optimizer);

  validate(cfg);
  return cfg;
}

/// Writes every field explicitly; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& cfg) {
  using detail::fmt17;
  std::ostringstream os;
  const DiffusionProfile& p = cfg.profile;
  os << "[profile]\n";
  switch (p.kind()) {
    case ProfileKind::Linear:
      os << "kind = linear\n";
      break;
    case ProfileKind::PowerLaw:
      os << "kind = power_law\nexponent = " << fmt17(p.exponent()) << "\n";
      break;
    case ProfileKind::OscillatingLog:
      os << "kind = oscillating_log\n";
      break;
    case ProfileKind::Tabulated:
      os << "kind = tabulated\ntheta = " << detail::join(p.table_theta(), ", ")
         << "\nvalue = " << detail::join(p.table_value(), ", ") << "\n";
      if (p.has_limit()) os << "limit_exponent = " << fmt17(p.exponent()) << "\n";
      break;
  }
  const HalfPlaneGrid& g = cfg.grid;
  os << "\n[grid]\nx_min = " << fmt17(g.x_min()) << "\nx_max = " << fmt17(g.x_max())
     << "\ntheta_max = " << fmt17(g.theta_max()) << "\nn_x = " << g.n_x() << "\nn_theta = " << g.n_theta()
     << "\n";
  os << "\n[region]\n";
  if (cfg.region.shape() == ConvexRegion::Shape::HalfPlaneCap) {
    os << "shape = half_plane_cap\nx_right = " << fmt17(cfg.region.x_right())
       << "\ntheta_cap = " << fmt17(cfg.region.theta_cap()) << "\n";
  } else {
    os << "shape = polygon\nvertices = ";
    const auto& v = cfg.region.vertices();
    for (std::size_t k = 0; k < v.size(); ++k) {
      os << (k ? "; " : "") << fmt17(v[k].x) << " " << fmt17(v[k].theta);
    }
    os << "\n";
  }
  os << "\n[run]\nepsilon = " << (cfg.epsilon ? fmt17(*cfg.epsilon) : std::string("limit"))
     << "\nt_final = " << fmt17(cfg.t_final) << "\ncadence = " << fmt17(cfg.cadence)
     << "\ncap = " << fmt17(cfg.cap)
     << "\nu0_ramp = " << (cfg.u0_ramp == RampKind::Smoothstep ? "smoothstep" : "cosine")
     << "\nu0_width_cells = " << fmt17(cfg.u0_width_cells) << "\npath_nodes = " << cfg.path_nodes
     << "\ntol_zero_level = " << fmt17(cfg.tol.zero_level) << "\ntol_scheme = " << fmt17(cfg.tol.scheme)
     << "\ntol_optimizer = " << fmt17(cfg.tol.optimizer) << "\n";
  return os.str();
}

}  // namespace canetoads
