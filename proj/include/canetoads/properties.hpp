#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "canetoads/config.hpp"
#include "canetoads/front.hpp"
#include "canetoads/hj_solver.hpp"
#include "canetoads/path_optimizer.hpp"
#include "canetoads/rd_solver.hpp"

// Randomized structural checks: maximum principle and comparison for the
// reaction-diffusion scheme, sign/range/comparison for the limit schemes,
// trait bounds along optimal paths, and insensitivity to the initial cap.

namespace canetoads::properties {

/// Small random configuration that passes validate().
inline RunConfig random_config(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };
  for (;;) {
    RunConfig c;
    switch (rng() % 3) {
      case 0:
        c.profile = DiffusionProfile::linear();
        break;
      case 1:
        c.profile = DiffusionProfile::power_law(uni(0.5, 2.0));
        break;
      default:
        c.profile = DiffusionProfile::oscillating_log();
        break;
    }
    c.epsilon = uni(0.08, 0.3);
    c.t_final = rng() % 2 ? 0.5 : 0.25;
    c.cadence = c.t_final / 2.0;
    const std::size_t nx = 26 + rng() % 16;
    const std::size_t nt = 16 + rng() % 12;
    const double theta_max = uni(1.5, 2.5);
    try {
      if (rng() % 2) {
        c.region = ConvexRegion::half_plane_cap(uni(-0.5, 0.5), uni(0.2, 0.6));
        c.grid = HalfPlaneGrid(-1.0, uni(2.5, 3.5), theta_max, nx, nt);
      } else {
        const double x0 = uni(-0.8, -0.2);
        const double x1 = x0 + uni(0.5, 1.0);
        const double h = uni(0.3, 0.8);
        const double w = x1 - x0;
        c.region = ConvexRegion::polygon(
            {{x0, 0.0}, {x1, 0.0}, {x1 - uni(0.0, 0.3) * w, h}, {x0 + uni(0.0, 0.3) * w, h}});
        c.grid = HalfPlaneGrid(-3.0, uni(2.5, 3.5), theta_max, nx + 10, nt);
      }
      validate(c);
      return c;
    } catch (const ConfigError&) {
    }
  }
}

/// Worst violation of each property in one random case; every entry is ≤ 0
/// when the property holds exactly (tolerances are applied by `pass`).
struct Report {
  std::uint64_t seed = 0;
  std::string profile;
  double rd_range = 0.0;        ///< outside [0, 1]
  double rd_order = 0.0;        ///< max (u_lo − u_hi)
  double i_negative = 0.0;      ///< max (−I)
  double j_below = 0.0;         ///< max (−t − J)
  double j_decay = 0.0;         ///< max (J(t₂) + t₂ − J(t₁) − t₁)
  double w_range = 0.0;         ///< outside [0, 1] or increasing in t
  double hj_order = 0.0;        ///< max (J_big − J_small) etc. for nested G₀
  double trait_excess = 0.0;    ///< max (max γ₂ − bound)
  double trait_dip = 0.0;       ///< max dip below the endpoint minimum
  double cap_shift_cells = 0.0; ///< |front(M) − front(2M)| / h_x

  [[nodiscard]] std::vector<std::pair<std::string, double>> entries() const {
    return {{"rd_range", rd_range},     {"rd_order", rd_order},         {"I_negative", i_negative},
            {"J_below_minus_t", j_below}, {"J_plus_t_increase", j_decay}, {"w_range", w_range},
            {"hj_order", hj_order},     {"trait_excess", trait_excess}, {"trait_dip", trait_dip},
            {"cap_shift_cells", cap_shift_cells - 1.0}};
  }

  /// `tol` bounds arithmetic noise; the cap shift may be up to one cell.
  [[nodiscard]] bool pass(double tol) const {
    for (const auto& [name, v] : entries()) {
      if (!(v <= tol)) return false;
    }
    return true;
  }
};

namespace detail {

inline double range_excess(const ScalarField& f, double lo, double hi) {
  double e = 0.0;
  for (double v : f.values) e = std::max({e, lo - v, v - hi, std::isfinite(v) ? 0.0 : HUGE_VAL});
  return e;
}

/// Lockstep solves of two problems from ordered data; returns max (b − a).
inline double hj_lockstep_order(const hj::HJProblem& a, const hj::HJProblem& b, double t) {
  ScalarField fa = hj::init_field(a);
  ScalarField fb = hj::init_field(b);
  hj::Scheme sa(a);
  hj::Scheme sb(b);
  const double h_cap = 0.5 * a.grid.h_max();
  double worst = 0.0;
  for (std::size_t k = 0; k < fa.values.size(); ++k) worst = std::max(worst, fb.values[k] - fa.values[k]);
  while (fa.time < t - 1e-12) {
    const double dt = std::min({sa.prepare(fa), sb.prepare(fb), h_cap, t - fa.time});
    sa.advance(fa, dt);
    sb.advance(fb, dt);
    for (std::size_t k = 0; k < fa.values.size(); ++k) worst = std::max(worst, fb.values[k] - fa.values[k]);
  }
  return worst;
}

}  // namespace detail

inline Report run_case(std::uint64_t seed) {
  Report r;
  r.seed = seed;
  const RunConfig cfg = random_config(seed);
  r.profile = cfg.profile.name();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Reaction-diffusion: range and comparison against a pointwise-smaller start.
  {
    rd::RDState hi = rd::init_u0(cfg);
    rd::RDState lo = hi;
    for (double& v : lo.u.values) v *= u01(rng);
    rd::Stepper s_hi(hi);
    rd::Stepper s_lo(lo);
    while (hi.time() < cfg.t_final - 1e-12) {
      s_hi.advance(hi);
      s_lo.advance(lo);
      r.rd_range = std::max({r.rd_range, detail::range_excess(hi.u, 0.0, 1.0), detail::range_excess(lo.u, 0.0, 1.0)});
      for (std::size_t k = 0; k < hi.u.values.size(); ++k) {
        r.rd_order = std::max(r.rd_order, lo.u.values[k] - hi.u.values[k]);
      }
    }
  }

  // Limit problems: signs, ranges, time monotonicity.
  for (hj::Equation eq : {hj::Equation::ObstacleI, hj::Equation::ActionJ, hj::Equation::GeometricW}) {
    hj::HJProblem p = hj::HJProblem::from_config(cfg, eq);
    const std::vector<ScalarField> snaps = hj::solve(p, cfg.t_final, cfg.cadence / 2.0);
    for (std::size_t s = 0; s < snaps.size(); ++s) {
      const ScalarField& f = snaps[s];
      for (std::size_t k = 0; k < f.values.size(); ++k) {
        const double v = f.values[k];
        switch (eq) {
          case hj::Equation::ObstacleI:
            r.i_negative = std::max(r.i_negative, -v);
            break;
          case hj::Equation::ActionJ:
            r.j_below = std::max(r.j_below, -f.time - v);
            if (s > 0) r.j_decay = std::max(r.j_decay, v + f.time - snaps[s - 1].values[k] - snaps[s - 1].time);
            break;
          case hj::Equation::GeometricW:
            r.w_range = std::max({r.w_range, -v, v - 1.0});
            if (s > 0) r.w_range = std::max(r.w_range, v - snaps[s - 1].values[k]);
            break;
        }
      }
    }
  }

  // Comparison: a larger initial region gives pointwise smaller I, J and w.
  {
    const ConvexRegion& g0 = cfg.region;
    ConvexRegion bigger = g0;
    if (g0.shape() == ConvexRegion::Shape::HalfPlaneCap) {
      bigger = ConvexRegion::half_plane_cap(g0.x_right() + 0.3 * u01(rng), g0.theta_cap() + 0.3 * u01(rng));
    } else {
      // Scaling about a point of G₀ on θ = 0 gives a superset that still rests on θ = 0.
      std::vector<Point> v = g0.vertices();
      const double grow = 1.0 + 0.3 * u01(rng);
      double cx = 0.0;
      for (const Point& q : v) cx += q.x / static_cast<double>(v.size());
      const Point base = g0.project(cx, 0.0);
      for (Point& q : v) q = {base.x + grow * (q.x - base.x), base.theta + grow * (q.theta - base.theta)};
      bigger = ConvexRegion::polygon(v);
    }
    for (hj::Equation eq : {hj::Equation::ObstacleI, hj::Equation::ActionJ, hj::Equation::GeometricW}) {
      hj::HJProblem a = hj::HJProblem::from_config(cfg, eq);
      hj::HJProblem b = a;
      b.region = bigger;
      r.hj_order = std::max(r.hj_order, detail::hj_lockstep_order(a, b, cfg.t_final));
    }
  }

  // Optimal paths stay below the trait bound and do not dip.
  {
    path::ActionOptions opt;
    opt.segments = 80;
    opt.perturbed_starts = 2;
    opt.seed = seed;
    std::uniform_real_distribution<double> ux(cfg.region.x_right() + 0.1, cfg.region.x_right() + 1.5);
    std::uniform_real_distribution<double> ut(0.0, cfg.grid.theta_max());
    for (int k = 0; k < 2; ++k) {
      const double t = 0.3 + u01(rng);
      const path::ActionResult a = path::minimize_action(ux(rng), ut(rng), t, cfg.profile, cfg.region, opt);
      r.trait_excess = std::max(r.trait_excess, a.path.max_theta() - path::trait_bound(a.path, a.cost));
      r.trait_dip = std::max(r.trait_dip, path::trait_dip(a.path));
    }
  }

  // Doubling the cap leaves the J front where it was.
  {
    hj::HJProblem p = hj::HJProblem::from_config(cfg, hj::Equation::ActionJ);
    hj::HJProblem q = p;
    q.cap = 2.0 * p.cap;
    const ScalarField a = hj::solve(p, cfg.t_final, cfg.t_final).back();
    const ScalarField b = hj::solve(q, cfg.t_final, cfg.t_final).back();
    double worst = 0.0;
    const std::vector<double> fa = front::row_fronts(a, 0.0);
    const std::vector<double> fb = front::row_fronts(b, 0.0);
    for (std::size_t j = 0; j < fa.size(); ++j) {
      if (std::isnan(fa[j]) != std::isnan(fb[j])) {
        worst = HUGE_VAL;
      } else if (!std::isnan(fa[j])) {
        worst = std::max(worst, std::abs(fa[j] - fb[j]));
      }
    }
    r.cap_shift_cells = worst / cfg.grid.h_x();
  }
  return r;
}

}  // namespace canetoads::properties
