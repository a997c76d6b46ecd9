#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "canetoads/errors.hpp"
#include "canetoads/front.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/path_optimizer.hpp"

namespace canetoads::io {

namespace fs = std::filesystem;

namespace detail {
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot write " + path.string());
  return out;
}
}  // namespace detail

/// Snapshot file name "<tag>_t<time>.csv", time with 6 decimals.
inline std::string snapshot_name(Quantity q, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_t%.6f.csv", std::string(to_string(q)).c_str(), t);
  return buf;
}

/// Reaction-diffusion snapshot: t, x, theta, u, v.
inline void write_rd_snapshot(const fs::path& path, const ScalarField& u, const ScalarField& v) {
  auto out = detail::open(path);
  out << "t,x,theta,u,v\n";
  const HalfPlaneGrid& g = u.grid;
  for (std::size_t j = 0; j < g.n_theta(); ++j) {
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      out << detail::num(u.time) << ',' << detail::num(g.x(i)) << ',' << detail::num(g.theta(j)) << ','
          << detail::num(u.at(i, j)) << ',' << detail::num(v.at(i, j)) << '\n';
    }
  }
}

/// Limit-field snapshot: t, x, theta, value, tag.
inline void write_field(const fs::path& path, const ScalarField& f) {
  auto out = detail::open(path);
  out << "t,x,theta,value,tag\n";
  const HalfPlaneGrid& g = f.grid;
  const std::string tag(to_string(f.tag));
  for (std::size_t j = 0; j < g.n_theta(); ++j) {
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      out << detail::num(f.time) << ',' << detail::num(g.x(i)) << ',' << detail::num(g.theta(j)) << ','
          << detail::num(f.at(i, j)) << ',' << tag << '\n';
    }
  }
}

/// Mask as the list of member nodes: i, j, x, theta.
inline void write_mask(const fs::path& path, const NodeMask& m) {
  auto out = detail::open(path);
  out << "i,j,x,theta\n";
  const HalfPlaneGrid& g = m.grid;
  for (std::size_t j = 0; j < g.n_theta(); ++j) {
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      if (m(i, j)) out << i << ',' << j << ',' << detail::num(g.x(i)) << ',' << detail::num(g.theta(j)) << '\n';
    }
  }
}

inline void write_trajectory(const fs::path& path, const path::Trajectory& tr) {
  auto out = detail::open(path);
  out << "s,gamma1,gamma2\n";
  const double ds = tr.ds();
  for (std::size_t k = 0; k < tr.nodes.size(); ++k) {
    out << detail::num(static_cast<double>(k) * ds) << ',' << detail::num(tr.nodes[k].x) << ','
        << detail::num(tr.nodes[k].theta) << '\n';
  }
}

inline void write_front_curve(const fs::path& path, const front::FrontCurve& c) {
  auto out = detail::open(path);
  out << "t,x_front,source,level\n";
  for (std::size_t k = 0; k < c.t.size(); ++k) {
    out << detail::num(c.t[k]) << ',' << detail::num(c.x[k]) << ',' << front::to_string(c.source) << ','
        << detail::num(c.level) << '\n';
  }
}

/// Per-row fronts of one snapshot: theta, x_front (rows without a crossing omitted).
inline void write_row_fronts(const fs::path& path, const ScalarField& f, double level) {
  auto out = detail::open(path);
  out << "theta,x_front\n";
  const std::vector<double> xs = front::row_fronts(f, level);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j] == xs[j]) out << detail::num(f.grid.theta(j)) << ',' << detail::num(xs[j]) << '\n';
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  auto out = detail::open(path);
  out << text;
}

/// Reads a snapshot written by write_field (tagged value) or write_rd_snapshot
/// (column u). Nodes must form a full tensor grid.
inline ScalarField read_field(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("input: cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  const bool rd = line == "t,x,theta,u,v";
  if (!rd && line != "t,x,theta,value,tag") throw ConfigError("input: unrecognized header in " + path.string());
  std::vector<double> xs, ts, vals;
  double time = 0.0;
  Quantity tag = Quantity::U;
  std::string tag_text = "u";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t p; (p = line.find(',', start)) != std::string::npos; start = p + 1) cols.push_back(line.substr(start, p - start));
    cols.push_back(line.substr(start));
    if (cols.size() != 5) throw ConfigError("input: expected 5 columns in " + path.string());
    time = std::stod(cols[0]);
    xs.push_back(std::stod(cols[1]));
    ts.push_back(std::stod(cols[2]));
    vals.push_back(std::stod(cols[3]));
    if (!rd) tag_text = cols[4];
  }
  if (vals.empty()) throw ConfigError("input: no rows in " + path.string());
  for (Quantity q : {Quantity::U, Quantity::V, Quantity::I, Quantity::J, Quantity::W, Quantity::D}) {
    if (to_string(q) == tag_text) tag = q;
  }
  std::size_t nx = 1;
  while (nx < ts.size() && ts[nx] == ts[0]) ++nx;
  if (vals.size() % nx != 0) throw ConfigError("input: nodes do not form a grid in " + path.string());
  const std::size_t nt = vals.size() / nx;
  HalfPlaneGrid g(xs.front(), xs[nx - 1], ts.back(), nx, nt);
  ScalarField f(g, tag, time);
  f.values = std::move(vals);
  return f;
}

}  // namespace canetoads::io
