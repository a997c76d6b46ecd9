#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "canetoads/diffusion.hpp"
#include "canetoads/errors.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/region.hpp"

namespace canetoads::path {

/// Discretized path γ on uniform times s_k = k t / M, k = 0..M.
/// nodes[0] is the fixed start (x, θ); nodes[M] should lie in Ḡ₀.
struct Trajectory {
  double duration = 1.0;
  std::vector<Point> nodes;
  /// Lower bound enforced on interior θ-values.
  double theta_floor = 0.0;

  [[nodiscard]] std::size_t segments() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
  [[nodiscard]] double ds() const { return duration / static_cast<double>(segments()); }
  [[nodiscard]] double max_theta() const {
    double m = 0.0;
    for (const Point& p : nodes) m = std::max(m, p.theta);
    return m;
  }
  [[nodiscard]] double min_theta() const {
    double m = HUGE_VAL;
    for (const Point& p : nodes) m = std::min(m, p.theta);
    return m;
  }
};

/// Straight path from `start` to `end`, interior θ clamped to the floor.
inline Trajectory straight_path(Point start, Point end, double t, std::size_t segments,
                                double theta_floor) {
  if (!(t > 0.0)) throw DomainError("trajectory duration must be positive");
  if (segments < 1) throw DomainError("trajectory needs at least one segment");
  Trajectory tr{t, std::vector<Point>(segments + 1), theta_floor};
  for (std::size_t k = 0; k <= segments; ++k) {
    const double r = static_cast<double>(k) / static_cast<double>(segments);
    Point p{start.x + r * (end.x - start.x), start.theta + r * (end.theta - start.theta)};
    if (k > 0 && k < segments) p.theta = std::max(p.theta, theta_floor);
    tr.nodes[k] = p;
  }
  tr.nodes.front() = start;
  tr.nodes.back() = end;
  return tr;
}

/// Σ Δs [ (Δγ₁/Δs)² / (4 D̄(mid)) + (Δγ₂/Δs)² / 4 − 1 ]; +∞ when D̄ vanishes on
/// a segment that moves in x.
inline double action_cost(const Trajectory& tr, const DiffusionProfile& profile) {
  const double ds = tr.ds();
  double cost = 0.0;
  for (std::size_t k = 0; k + 1 < tr.nodes.size(); ++k) {
    const Point a = tr.nodes[k];
    const Point b = tr.nodes[k + 1];
    const double dx = b.x - a.x;
    const double dt = b.theta - a.theta;
    const double d = profile.limit(0.5 * (a.theta + b.theta));
    double lx = 0.0;
    if (dx != 0.0) {
      if (!(d > 0.0)) return HUGE_VAL;
      lx = dx * dx / (4.0 * ds * d);
    }
    cost += lx + dt * dt / (4.0 * ds) - ds;
  }
  return cost;
}

/// Σ Δs · ½ sqrt((Δγ₁/Δs)² / D̄(mid) + (Δγ₂/Δs)²): the metric length of the path.
inline double geodesic_length(const Trajectory& tr, const DiffusionProfile& profile) {
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < tr.nodes.size(); ++k) {
    const Point a = tr.nodes[k];
    const Point b = tr.nodes[k + 1];
    const double dx = b.x - a.x;
    const double dt = b.theta - a.theta;
    const double d = profile.limit(0.5 * (a.theta + b.theta));
    double qx = 0.0;
    if (dx != 0.0) {
      if (!(d > 0.0)) return HUGE_VAL;
      qx = dx * dx / d;
    }
    len += 0.5 * std::sqrt(qx + dt * dt);
  }
  return len;
}

inline Trajectory reversed(const Trajectory& tr) {
  Trajectory r = tr;
  std::reverse(r.nodes.begin(), r.nodes.end());
  return r;
}

struct ActionOptions {
  std::size_t segments = 200;
  /// Interior θ floor; default h_θ / 10 of the companion grid.
  double theta_floor = 1.25e-3;
  /// Straight start plus this many perturbed starts.
  std::size_t perturbed_starts = 4;
  std::uint64_t seed = 20240601;
  double tol = 1e-8;
  std::size_t max_iterations = 10000;
};

struct ActionResult {
  double cost = HUGE_VAL;
  Trajectory path;
  std::size_t iterations = 0;
  /// Some start stopped on the iteration limit rather than on the tolerance.
  bool iteration_limit = false;
  std::size_t best_start = 0;
};

namespace detail {

// Solves a symmetric tridiagonal system in place (Thomas); diag must dominate.
inline void solve_tridiagonal(std::vector<double>& diag, std::vector<double>& off,
                              std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double m = off[k - 1] / diag[k - 1];
    diag[k] -= m * off[k - 1];
    rhs[k] -= m * rhs[k - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) rhs[k] = (rhs[k] - off[k] * rhs[k + 1]) / diag[k];
}

/// Cost, gradient and a tridiagonal curvature model per component.
struct Local {
  double cost = 0.0;
  std::vector<double> gx, gt;
  std::vector<double> hx_diag, hx_off, ht_diag, ht_off;
};

inline Local evaluate(const Trajectory& tr, const DiffusionProfile& profile) {
  const std::size_t n = tr.nodes.size();
  const double ds = tr.ds();
  Local e;
  e.gx.assign(n, 0.0);
  e.gt.assign(n, 0.0);
  e.hx_diag.assign(n, 0.0);
  e.ht_diag.assign(n, 0.0);
  e.hx_off.assign(n - 1, 0.0);
  e.ht_off.assign(n - 1, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Point a = tr.nodes[k];
    const Point b = tr.nodes[k + 1];
    const double dx = b.x - a.x;
    const double dt = b.theta - a.theta;
    const double m = 0.5 * (a.theta + b.theta);
    const double d = profile.limit(m);
    if (!(d > 0.0)) {
      e.cost = HUGE_VAL;
      return e;
    }
    const double d1 = profile.limit_derivative(m);
    const double d2 = profile.limit_second_derivative(m);
    e.cost += dx * dx / (4.0 * ds * d) + dt * dt / (4.0 * ds) - ds;

    const double cx = 1.0 / (2.0 * ds * d);
    e.gx[k + 1] += cx * dx;
    e.gx[k] -= cx * dx;
    e.hx_diag[k] += cx;
    e.hx_diag[k + 1] += cx;
    e.hx_off[k] -= cx;

    const double ct = 1.0 / (2.0 * ds);
    const double dm = -dx * dx * d1 / (4.0 * ds * d * d);
    e.gt[k + 1] += ct * dt + 0.5 * dm;
    e.gt[k] += -ct * dt + 0.5 * dm;
    // curvature of 1/D̄ along the midpoint, kept only where it is convex
    const double phi2 = (2.0 * d1 * d1 - d * d2) / (d * d * d);
    const double q = std::max(0.0, dx * dx / (4.0 * ds) * phi2 / 4.0);
    e.ht_diag[k] += ct + q;
    e.ht_diag[k + 1] += ct + q;
    e.ht_off[k] += -ct + q;
  }
  return e;
}

// Newton direction of the tridiagonal model on the free nodes 1..M; nodes
// flagged in `fixed` get a zero direction.
inline std::vector<double> direction(const std::vector<double>& g, const std::vector<double>& diag,
                                     const std::vector<double>& off,
                                     const std::vector<std::uint8_t>& fixed) {
  const std::size_t n = g.size() - 1;
  std::vector<double> dg(n), of(n > 0 ? n - 1 : 0, 0.0), r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t node = k + 1;
    if (fixed[node]) {
      dg[k] = 1.0;
      r[k] = 0.0;
    } else {
      dg[k] = std::max(diag[node], 1e-300);
      r[k] = -g[node];
    }
    if (k + 1 < n) of[k] = (fixed[node] || fixed[node + 1]) ? 0.0 : off[node];
  }
  solve_tridiagonal(dg, of, r);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) out[k + 1] = r[k];
  return out;
}

inline void project(Trajectory& tr, const ConvexRegion& region) {
  const std::size_t m = tr.nodes.size() - 1;
  for (std::size_t k = 1; k < m; ++k) tr.nodes[k].theta = std::max(tr.nodes[k].theta, tr.theta_floor);
  tr.nodes[m] = region.project(tr.nodes[m].x, std::max(tr.nodes[m].theta, 0.0));
}

}  // namespace detail

/// Descends from `start` (modified in place) until one iteration lowers the
/// cost by less than `tol` or `max_iterations` is reached. Returns the number
/// of iterations and sets `limit_hit`.
///
/// Each iteration: Newton step of a tridiagonal curvature model per component
/// (the exact Hessian of the kinetic terms, plus the convex part of the
/// D̄-curvature), with nodes held fixed where a bound is active and the
/// gradient pushes outward (two-metric projection), then Armijo backtracking
/// on the projected path.
inline std::size_t descend(Trajectory& tr, const DiffusionProfile& profile, const ConvexRegion& region,
                           double tol, std::size_t max_iterations, bool& limit_hit) {
  detail::project(tr, region);
  const std::size_t n = tr.nodes.size();
  const std::size_t m = n - 1;
  const bool box = region.shape() == ConvexRegion::Shape::HalfPlaneCap;
  detail::Local e = detail::evaluate(tr, profile);
  std::size_t it = 0;
  limit_hit = false;
  std::vector<std::uint8_t> fix_x(n, 0), fix_t(n, 0);
  for (; it < max_iterations; ++it) {
    std::fill(fix_x.begin(), fix_x.end(), 0);
    std::fill(fix_t.begin(), fix_t.end(), 0);
    fix_x[0] = fix_t[0] = 1;
    const double active = 1e-12;
    for (std::size_t k = 1; k < m; ++k) {
      if (tr.nodes[k].theta <= tr.theta_floor + active && e.gt[k] > 0.0) fix_t[k] = 1;
    }
    const Point end = tr.nodes[m];
    if (box) {
      if (end.x >= region.x_right() - active && e.gx[m] < 0.0) fix_x[m] = 1;
      if (end.theta <= active && e.gt[m] > 0.0) fix_t[m] = 1;
      if (end.theta >= region.theta_cap() - active && e.gt[m] < 0.0) fix_t[m] = 1;
    }
    const std::vector<double> px = detail::direction(e.gx, e.hx_diag, e.hx_off, fix_x);
    const std::vector<double> pt = detail::direction(e.gt, e.ht_diag, e.ht_off, fix_t);

    double alpha = 1.0;
    bool accepted = false;
    Trajectory trial = tr;
    detail::Local te;
    for (int ls = 0; ls < 50; ++ls) {
      for (std::size_t k = 1; k < n; ++k) {
        trial.nodes[k].x = tr.nodes[k].x + alpha * px[k];
        trial.nodes[k].theta = tr.nodes[k].theta + alpha * pt[k];
      }
      detail::project(trial, region);
      double slope = 0.0;
      for (std::size_t k = 1; k < n; ++k) {
        slope += e.gx[k] * (trial.nodes[k].x - tr.nodes[k].x) +
                 e.gt[k] * (trial.nodes[k].theta - tr.nodes[k].theta);
      }
      te = detail::evaluate(trial, profile);
      if (te.cost <= e.cost + 1e-4 * std::min(slope, 0.0) && te.cost < e.cost) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const double decrease = e.cost - te.cost;
    tr = std::move(trial);
    e = std::move(te);
    if (decrease < tol) {
      ++it;
      return it;
    }
  }
  if (it >= max_iterations) limit_hit = true;
  return it;
}

/// J(x, θ, t) ≈ min over discretized paths from (x, θ) ending in Ḡ₀.
///
/// Starts: the straight path to the Euclidean projection of the start point,
/// plus `perturbed_starts` paths bent upwards by A sin(π s / t) towards random
/// endpoints of Ḡ₀ (A and endpoints from a seeded generator).
inline ActionResult minimize_action(double x, double theta, double t, const DiffusionProfile& profile,
                                    const ConvexRegion& region, const ActionOptions& opt = {}) {
  if (!(t > 0.0)) throw DomainError("minimize_action: t must be positive");
  if (!(theta >= 0.0)) throw DomainError("minimize_action: theta must be >= 0");
  if (!profile.has_limit()) throw UnsupportedError("minimize_action: profile has no declared limit");
  const Point start{x, theta};
  const std::size_t n = opt.segments;
  ActionResult best;

  if (region.contains(x, theta) && theta > 0.0) {
    best.path = straight_path(start, start, t, n, opt.theta_floor);
    best.cost = action_cost(best.path, profile);
    return best;
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Point target = region.project(x, theta);
  for (std::size_t s = 0; s <= opt.perturbed_starts; ++s) {
    Trajectory tr;
    if (s == 0) {
      tr = straight_path(start, target, t, n, opt.theta_floor);
    } else {
      Point end = target;
      if (region.shape() == ConvexRegion::Shape::HalfPlaneCap) {
        end = {std::min(target.x, region.x_right()) - 0.5 * unit(rng) * t,
               unit(rng) * region.theta_cap()};
      } else {
        const auto& v = region.vertices();
        const Point a = v[static_cast<std::size_t>(unit(rng) * static_cast<double>(v.size())) % v.size()];
        const double r = unit(rng);
        end = {target.x + r * (a.x - target.x), target.theta + r * (a.theta - target.theta)};
      }
      tr = straight_path(start, end, t, n, opt.theta_floor);
      const double amp = (0.25 + 1.25 * unit(rng)) * t;
      for (std::size_t k = 1; k < n; ++k) {
        tr.nodes[k].theta += amp * std::sin(M_PI * static_cast<double>(k) / static_cast<double>(n));
      }
    }
    bool limit_hit = false;
    const std::size_t its = descend(tr, profile, region, opt.tol, opt.max_iterations, limit_hit);
    const double c = action_cost(tr, profile);
    best.iterations += its;
    best.iteration_limit = best.iteration_limit || limit_hit;
    if (c < best.cost) {
      best.cost = c;
      best.path = std::move(tr);
      best.best_start = s;
    }
  }
  return best;
}

/// Metric distance from (x, θ) to Ḡ₀ through the optimal unit-time action
/// path: its geodesic length.
inline double path_distance(double x, double theta, const DiffusionProfile& profile,
                            const ConvexRegion& region, const ActionOptions& opt = {}) {
  if (region.contains(x, theta)) return 0.0;
  const ActionResult r = minimize_action(x, theta, 1.0, profile, region, opt);
  return geodesic_length(r.path, profile);
}

/// Upper bound on max_s γ₂ for a path of cost `cost`:
/// θ + 2 sqrt(t) sqrt(cost + t + 1).
inline double trait_bound(const Trajectory& tr, double cost) {
  return tr.nodes.front().theta + 2.0 * std::sqrt(tr.duration) * std::sqrt(std::max(cost + tr.duration + 1.0, 0.0));
}

/// Amount by which the path dips below min(γ₂(0), γ₂(t)); zero when it does not.
inline double trait_dip(const Trajectory& tr) {
  const double level = std::min(tr.nodes.front().theta, tr.nodes.back().theta);
  return std::max(0.0, level - tr.min_theta());
}

/// Geodesic-distance problem: metric N(θ, p) = ½ sqrt(p_x² / D̄(θ) + p_θ²).
struct GeodesicProblem {
  DiffusionProfile profile = DiffusionProfile::linear();
  ConvexRegion region = ConvexRegion::half_plane_cap(0.0, 0.2);
  HalfPlaneGrid grid{-1.0, 3.0, 2.5, 401, 201};
  double tol = 1e-8;
  std::size_t max_cycles = 1000;
};

inline double metric_length_density(const DiffusionProfile& profile, double theta, double px, double pt) {
  const double d = profile.limit(theta);
  if (px != 0.0 && !(d > 0.0)) return HUGE_VAL;
  return 0.5 * std::sqrt((px != 0.0 ? px * px / d : 0.0) + pt * pt);
}

/// Distance to Ḡ₀ in the metric N: fast sweeping for 4 D̄ d_x² + 4 d_θ² = 1,
/// d = 0 on Ḡ₀, first-order Godunov upwind update, four orderings per cycle.
/// On θ = 0 the x-term vanishes and the update is vertical only.
inline ScalarField eikonal_distance(const GeodesicProblem& problem, std::size_t* cycles_out = nullptr) {
  const HalfPlaneGrid& g = problem.grid;
  const std::size_t nx = g.n_x();
  const std::size_t nt = g.n_theta();
  ScalarField d(g, Quantity::D, 0.0, HUGE_VAL);
  std::vector<std::uint8_t> source(g.size(), 0);
  bool any = false;
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (problem.region.contains(g.x(i), g.theta(j))) {
        source[g.index(i, j)] = 1;
        d.at(i, j) = 0.0;
        any = true;
      }
    }
  }
  if (!any) throw ConfigError("region: no grid node lies in G0");
  std::vector<double> alpha(nt);
  for (std::size_t j = 0; j < nt; ++j) alpha[j] = 2.0 * std::sqrt(problem.profile.limit(g.theta(j))) / g.h_x();
  const double beta = 2.0 / g.h_theta();

  auto update = [&](std::size_t i, std::size_t j) -> double {
    const std::size_t k = g.index(i, j);
    if (source[k]) return 0.0;
    double b = HUGE_VAL;
    if (j == 0) {
      b = d.values[k + nx];
    } else {
      b = d.values[k - nx];
      if (j + 1 < nt) b = std::min(b, d.values[k + nx]);
    }
    const double al = alpha[j];
    double cand = b + 1.0 / beta;
    if (al > 0.0) {
      double a = HUGE_VAL;
      if (i > 0) a = d.values[k - 1];
      if (i + 1 < nx) a = std::min(a, d.values[k + 1]);
      cand = std::min(cand, a + 1.0 / al);
      if (std::isfinite(a) && std::isfinite(b) && cand > std::max(a, b)) {
        // α²(u − a)² + β²(u − b)² = 1, larger root
        const double A = al * al + beta * beta;
        const double B = al * al * a + beta * beta * b;
        const double C = al * al * a * a + beta * beta * b * b - 1.0;
        const double disc = B * B - A * C;
        if (disc >= 0.0) {
          const double u = (B + std::sqrt(disc)) / A;
          if (u >= std::max(a, b)) cand = std::min(cand, u);
        }
      }
    }
    return std::min(d.values[k], cand);
  };

  std::size_t cycle = 0;
  double change = HUGE_VAL;
  for (; cycle < problem.max_cycles; ++cycle) {
    change = 0.0;
    for (int order = 0; order < 4; ++order) {
      const bool rev_i = order & 1;
      const bool rev_j = order & 2;
      for (std::size_t jj = 0; jj < nt; ++jj) {
        const std::size_t j = rev_j ? nt - 1 - jj : jj;
        for (std::size_t ii = 0; ii < nx; ++ii) {
          const std::size_t i = rev_i ? nx - 1 - ii : ii;
          const std::size_t k = g.index(i, j);
          const double u = update(i, j);
          if (u < d.values[k]) {
            const double prev = d.values[k];
            change = std::max(change, std::isfinite(prev) ? prev - u : HUGE_VAL);
            d.values[k] = u;
          }
        }
      }
    }
    if (change <= problem.tol) break;
  }
  if (cycles_out) *cycles_out = cycle + 1;
  if (change > problem.tol) {
    throw NumericalError("eikonal: no convergence after " + std::to_string(problem.max_cycles) +
                         " sweep cycles, last change " + std::to_string(change));
  }
  return d;
}

/// {d ≤ t}: the zero set of w at time t.
inline NodeMask w_from_distance(const ScalarField& d, double t) {
  NodeMask m(d.grid);
  for (std::size_t k = 0; k < d.values.size(); ++k) m.inside[k] = d.values[k] <= t ? 1 : 0;
  return m;
}

}  // namespace canetoads::path
