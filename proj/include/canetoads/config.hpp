#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "canetoads/diffusion.hpp"
#include "canetoads/errors.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/region.hpp"

namespace canetoads {

/// Shape of the ramp used to mollify the indicator of G₀ in the initial datum.
enum class RampKind { Smoothstep, Cosine };

struct Tolerances {
  /// Level slack for zero sets of I ({I <= zero_level}).
  double zero_level = 1e-9;
  /// Slack granted to monotonicity/ordering checks beyond 1e-12 arithmetic noise.
  double scheme = 1e-9;
  /// Path optimizer stops when one iteration lowers the cost by less than this.
  double optimizer = 1e-8;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct RunConfig {
  /// Scaling parameter; empty means the ε → 0 limit problems.
  std::optional<double> epsilon = 0.1;
  DiffusionProfile profile = DiffusionProfile::linear();
  HalfPlaneGrid grid{-1.0, 3.0, 2.5, 401, 201};
  ConvexRegion region = ConvexRegion::half_plane_cap(0.0, 0.2);
  double t_final = 1.0;
  /// Snapshot spacing; must divide t_final.
  double cadence = 0.5;
  /// Finite stand-in for the +∞ initial data of I and J.
  double cap = 1e3;
  RampKind u0_ramp = RampKind::Smoothstep;
  /// Ramp width of u₀ in units of max(h_x, h_θ).
  double u0_width_cells = 2.0;
  /// Trajectory nodes for the action minimizer.
  std::size_t path_nodes = 200;
  Tolerances tol;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Front abscissa predicted by the accelerating law, x_right + (4/3) t sqrt(D̄(t)),
/// using D̄ when declared and otherwise D̄^ε.
inline double predicted_front(const RunConfig& cfg, double t) {
  double d = 0.0;
  if (cfg.profile.has_limit()) {
    d = cfg.profile.limit(t);
  } else if (cfg.epsilon) {
    d = cfg.profile.rescaled(t, *cfg.epsilon);
  } else {
    throw ConfigError("profile: limit runs need a profile with a declared limit");
  }
  return cfg.region.x_right() + 4.0 / 3.0 * t * std::sqrt(d);
}

/// Highest trait reached by the invaded set at time t: purely vertical paths
/// of unit speed cost give θ̄ + 2t.
inline double predicted_trait_reach(const RunConfig& cfg, double t) {
  return cfg.region.theta_cap() + 2.0 * t;
}

namespace detail {
inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}
}  // namespace detail

/// Throws ConfigError naming the offending key and constraint.
inline void validate(const RunConfig& cfg) {
  using detail::fmt_double;
  if (cfg.epsilon && (!(*cfg.epsilon > 0.0) || !std::isfinite(*cfg.epsilon))) {
    throw ConfigError("run.epsilon: must be positive (or 'limit')");
  }
  if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final)) {
    throw ConfigError("run.t_final: must be positive");
  }
  if (!(cfg.cadence > 0.0) || cfg.cadence > cfg.t_final * (1 + 1e-12)) {
    throw ConfigError("run.cadence: must lie in (0, t_final]");
  }
  const double ratio = cfg.t_final / cfg.cadence;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("run.cadence: must divide t_final");
  }
  if (!(cfg.cap > 0.0) || !std::isfinite(cfg.cap)) throw ConfigError("run.cap: must be positive and finite");
  if (!(cfg.u0_width_cells > 0.0)) throw ConfigError("run.u0_width_cells: must be positive");
  if (cfg.path_nodes < 8) throw ConfigError("run.path_nodes: need at least 8 nodes");
  if (!(cfg.tol.zero_level >= 0.0) || !(cfg.tol.scheme >= 0.0) || !(cfg.tol.optimizer > 0.0)) {
    throw ConfigError("run.tolerances: must be nonnegative (optimizer tolerance positive)");
  }
  if (!cfg.epsilon && !cfg.profile.has_limit()) {
    throw ConfigError("profile: limit runs need a profile with a declared limit");
  }
  const HalfPlaneGrid& g = cfg.grid;
  const ConvexRegion& r = cfg.region;
  if (!(g.theta_max() > r.theta_cap())) {
    throw ConfigError("grid.theta_max: must exceed region.theta_cap (" + fmt_double(r.theta_cap()) + ")");
  }
  if (!(r.x_right() > g.x_min() && r.x_right() < g.x_max())) {
    throw ConfigError("region.x_right: must lie strictly inside [grid.x_min, grid.x_max]");
  }
  bool interior_node = false;
  for (std::size_t j = 1; j < g.n_theta() && !interior_node; ++j) {
    for (std::size_t i = 0; i < g.n_x() && !interior_node; ++i) {
      interior_node = r.signed_distance(g.x(i), g.theta(j)) < 0.0;
    }
  }
  if (!interior_node) throw ConfigError("region: no grid node lies in the interior of G0");

  const double width = g.x_max() - g.x_min();
  const double front = predicted_front(cfg, cfg.t_final);
  if (front > g.x_max() - 0.1 * width) {
    throw ConfigError("grid.x_max: predicted front x_r + (4/3) t sqrt(D(t)) = " + fmt_double(front) +
                      " at t_final comes within 10% of the domain width of x_max = " +
                      fmt_double(g.x_max()));
  }
  if (r.shape() == ConvexRegion::Shape::Polygon) {
    const double left = r.x_left() - (front - r.x_right());
    if (left < g.x_min() + 0.1 * width) {
      throw ConfigError("grid.x_min: predicted leftward front " + fmt_double(left) +
                        " comes within 10% of the domain width of x_min");
    }
  }
  const double reach = predicted_trait_reach(cfg, cfg.t_final);
  if (reach > 0.9 * g.theta_max()) {
    throw ConfigError("grid.theta_max: predicted trait reach theta_cap + 2 t = " + fmt_double(reach) +
                      " comes within 10% of theta_max = " + fmt_double(g.theta_max()));
  }
}

}  // namespace canetoads
