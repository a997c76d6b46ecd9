#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "canetoads/config.hpp"
#include "canetoads/diffusion.hpp"
#include "canetoads/errors.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/region.hpp"

namespace canetoads::hj {

/// The three limit problems.
///  - ObstacleI:  min{I_t + D̄ I_x² + I_θ² + 1, I} = 0, I(·,0) = 0 on Ḡ₀, +∞ outside.
///  - ActionJ:    J_t + D̄ J_x² + J_θ² + 1 = 0, same initial data.
///  - GeometricW: w_t + 2 sqrt(D̄ w_x² + w_θ²) = 0, w(·,0) = 0 on Ḡ₀, 1 outside.
enum class Equation { ObstacleI, ActionJ, GeometricW };

/// How the Lax–Friedrichs dissipation is chosen each step.
///  - Local: per node, the bound of |∂H/∂p| over that node's one-sided slopes.
///  - Global: per axis, the maximum of the local bounds over the grid.
enum class Dissipation { Local, Global };

/// Unknown actually advanced by the scheme for I and J.
///  - Direct: the field itself, with the Hamiltonian above.
///  - SquareRoot: Ψ = sqrt(u + t), which solves Ψ_t + 2Ψ(D̄ Ψ_x² + Ψ_θ²) = 0
///    (the +1 is absorbed by the shift). Ψ is Lipschitz uniformly in time for
///    the singular initial data, so the O(|∂H/∂p| h) scheme viscosity no longer
///    acts on the 1/t curvature of u. The map u ↦ Ψ is increasing, so
///    monotonicity and comparison carry over.
/// GeometricW always uses Direct.
enum class Formulation { SquareRoot, Direct };

inline Quantity quantity_of(Equation e) {
  switch (e) {
    case Equation::ObstacleI:
      return Quantity::I;
    case Equation::ActionJ:
      return Quantity::J;
    case Equation::GeometricW:
      return Quantity::W;
  }
  return Quantity::I;
}

struct HJProblem {
  Equation equation = Equation::ActionJ;
  DiffusionProfile profile = DiffusionProfile::linear();  ///< only D̄ is used
  ConvexRegion region = ConvexRegion::half_plane_cap(0.0, 0.2);
  double cap = 1e3;
  HalfPlaneGrid grid{-1.0, 3.0, 2.5, 401, 201};
  Dissipation dissipation = Dissipation::Local;
  Formulation formulation = Formulation::SquareRoot;
  /// Per-axis dissipation maxima used by the most recent step.
  double sigma_x = 0.0;
  double sigma_theta = 0.0;

  static HJProblem from_config(const RunConfig& cfg, Equation eq) {
    HJProblem p;
    p.equation = eq;
    p.profile = cfg.profile;
    p.region = cfg.region;
    p.cap = cfg.cap;
    p.grid = cfg.grid;
    return p;
  }
};

/// H(θ, p) without the dissipation term.
inline double hamiltonian(Equation eq, double dbar, double px, double pt) {
  if (eq == Equation::GeometricW) return 2.0 * std::sqrt(dbar * px * px + pt * pt);
  return dbar * px * px + pt * pt + 1.0;
}

/// Bounds of |∂H/∂p_x| and |∂H/∂p_θ| over the box spanned by the one-sided slopes.
struct SlopeBound {
  double x;
  double theta;
};

inline SlopeBound slope_bound(Equation eq, double dbar, double pxm, double pxp, double ptm,
                              double ptp) {
  if (eq == Equation::GeometricW) return {2.0 * std::sqrt(dbar), 2.0};
  return {2.0 * dbar * std::max(std::abs(pxm), std::abs(pxp)),
          2.0 * std::max(std::abs(ptm), std::abs(ptp))};
}

/// Lax–Friedrichs numerical Hamiltonian
/// H(θ, p̄_x, p̄_θ) − σ_x (p_x⁺ − p_x⁻)/2 − σ_θ (p_θ⁺ − p_θ⁻)/2.
inline double numerical_hamiltonian(Equation eq, double dbar, double pxm, double pxp, double ptm,
                                    double ptp, double sigma_x, double sigma_theta) {
  return hamiltonian(eq, dbar, 0.5 * (pxm + pxp), 0.5 * (ptm + ptp)) -
         0.5 * sigma_x * (pxp - pxm) - 0.5 * sigma_theta * (ptp - ptm);
}

inline double numerical_hamiltonian(const HJProblem& problem, double theta, double pxm, double pxp,
                                    double ptm, double ptp) {
  return numerical_hamiltonian(problem.equation, problem.profile.limit(theta), pxm, pxp, ptm, ptp,
                               problem.sigma_x, problem.sigma_theta);
}

inline ScalarField init_field(const HJProblem& problem) {
  const HalfPlaneGrid& g = problem.grid;
  const double outside = problem.equation == Equation::GeometricW ? 1.0 : problem.cap;
  ScalarField f(g, quantity_of(problem.equation));
  for (std::size_t j = 0; j < g.n_theta(); ++j) {
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      f.at(i, j) = problem.region.contains(g.x(i), g.theta(j)) ? 0.0 : outside;
    }
  }
  return f;
}

/// Explicit monotone stepping of one limit problem.
///
/// Slopes at θ = 0 come from the even reflection u(x,−h) = u(x,h), so the
/// degenerate x-term drops out there because D̄(0) = 0. At the artificial
/// edges the ghost value continues the inner slope when information leaves
/// the domain and reflects it otherwise; both branches keep the scheme monotone.
///
/// The numerical Hamiltonian is clipped from below by inf H (1 for I and J, 0
/// for w and for Ψ): the update becomes min(LF update, u − dt inf H), which is
/// still monotone and consistent, and reproduces u_t ≤ −inf H exactly.
class Scheme {
 public:
  explicit Scheme(const HJProblem& problem)
      : problem_(problem),
        sqrt_form_(problem.equation != Equation::GeometricW &&
                   problem.formulation == Formulation::SquareRoot),
        dbar_(problem.grid.n_theta()),
        sx_(problem.grid.size()),
        st_(problem.grid.size()),
        work_(problem.grid.size()),
        next_(problem.grid.size()) {
    for (std::size_t j = 0; j < dbar_.size(); ++j) dbar_[j] = problem.profile.limit(problem.grid.theta(j));
  }

  /// Computes dissipation for `field` and returns the largest admissible step
  /// 0.9 min(h_x / (2σ_x), h_θ / (2σ_θ), 1 / (2c)), where c bounds ∂H/∂u
  /// (zero except for the Ψ form). Infinite if the field is flat.
  double prepare(const ScalarField& field) {
    const HalfPlaneGrid& g = problem_.grid;
    const std::size_t nx = g.n_x();
    const std::size_t nt = g.n_theta();
    load(field);
    const auto& v = work_;
    double mx = 0.0;
    double mt = 0.0;
    double mc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t k = j * nx + i;
        const Slopes s = slopes(v, i, j);
        double bx = 0.0;
        double bt = 0.0;
        if (sqrt_form_) {
          bx = 4.0 * v[k] * dbar_[j] * std::max(std::abs(s.xm), std::abs(s.xp));
          bt = 4.0 * v[k] * std::max(std::abs(s.tm), std::abs(s.tp));
          const double px = 0.5 * (s.xm + s.xp);
          const double pt = 0.5 * (s.tm + s.tp);
          mc = std::max(mc, 2.0 * (dbar_[j] * px * px + pt * pt));
        } else {
          const SlopeBound b = slope_bound(problem_.equation, dbar_[j], s.xm, s.xp, s.tm, s.tp);
          bx = b.x;
          bt = b.theta;
        }
        sx_[k] = bx;
        st_[k] = bt;
        mx = std::max(mx, bx);
        mt = std::max(mt, bt);
      }
    }
    if (problem_.dissipation == Dissipation::Global) {
      std::fill(sx_.begin(), sx_.end(), mx);
      std::fill(st_.begin(), st_.end(), mt);
    }
    problem_.sigma_x = mx;
    problem_.sigma_theta = mt;
    const double lx = mx > 0.0 ? g.h_x() / (2.0 * mx) : HUGE_VAL;
    const double lt = mt > 0.0 ? g.h_theta() / (2.0 * mt) : HUGE_VAL;
    const double lc = mc > 0.0 ? 1.0 / (2.0 * mc) : HUGE_VAL;
    return 0.9 * std::min({lx, lt, lc});
  }

  /// One forward-Euler step; `prepare` must have been called on `field`.
  void advance(ScalarField& field, double dt) {
    const HalfPlaneGrid& g = problem_.grid;
    const std::size_t nx = g.n_x();
    const std::size_t nt = g.n_theta();
    const auto& v = work_;
    const Equation eq = problem_.equation;
    const double t_new = field.time + dt;
    const double psi_floor = eq == Equation::ObstacleI ? std::sqrt(t_new) : 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t k = j * nx + i;
        const Slopes s = slopes(v, i, j);
        double u = 0.0;
        if (sqrt_form_) {
          const double px = 0.5 * (s.xm + s.xp);
          const double pt = 0.5 * (s.tm + s.tp);
          const double h = 2.0 * v[k] * (dbar_[j] * px * px + pt * pt) -
                           0.5 * sx_[k] * (s.xp - s.xm) - 0.5 * st_[k] * (s.tp - s.tm);
          u = std::max(v[k] - dt * std::max(h, 0.0), psi_floor);
        } else {
          const double h = numerical_hamiltonian(eq, dbar_[j], s.xm, s.xp, s.tm, s.tp, sx_[k], st_[k]);
          const double h_min = eq == Equation::GeometricW ? 0.0 : 1.0;
          u = v[k] - dt * std::max(h, h_min);
          if (eq == Equation::ObstacleI) u = std::max(u, 0.0);
          if (eq == Equation::GeometricW) u = std::clamp(u, 0.0, 1.0);
        }
        if (!std::isfinite(u)) {
          throw NumericalError("hj: non-finite value at node (i=" + std::to_string(i) +
                               ", j=" + std::to_string(j) + ")");
        }
        next_[k] = u;
      }
    }
    if (sqrt_form_) {
      for (std::size_t k = 0; k < next_.size(); ++k) {
        field.values[k] = next_[k] * next_[k] - t_new;
        if (eq == Equation::ObstacleI) field.values[k] = std::max(field.values[k], 0.0);
      }
    } else {
      field.values.swap(next_);
    }
    field.time = t_new;
  }

  [[nodiscard]] const HJProblem& problem() const noexcept { return problem_; }

 private:
  struct Slopes {
    double xm, xp, tm, tp;
  };

  void load(const ScalarField& field) {
    if (sqrt_form_) {
      for (std::size_t k = 0; k < work_.size(); ++k) {
        work_[k] = std::sqrt(std::max(field.values[k] + field.time, 0.0));
      }
    } else {
      work_ = field.values;
    }
  }

  [[nodiscard]] Slopes slopes(const std::vector<double>& v, std::size_t i, std::size_t j) const {
    const HalfPlaneGrid& g = problem_.grid;
    const std::size_t nx = g.n_x();
    const std::size_t nt = g.n_theta();
    const std::size_t k = j * nx + i;
    const double c = v[k];
    Slopes s{};
    if (i == 0) {
      s.xp = (v[k + 1] - c) / g.h_x();
      s.xm = s.xp <= 0.0 ? s.xp : -s.xp;
    } else if (i + 1 == nx) {
      s.xm = (c - v[k - 1]) / g.h_x();
      s.xp = s.xm >= 0.0 ? s.xm : -s.xm;
    } else {
      s.xm = (c - v[k - 1]) / g.h_x();
      s.xp = (v[k + 1] - c) / g.h_x();
    }
    if (j == 0) {
      s.tp = (v[k + nx] - c) / g.h_theta();
      s.tm = -s.tp;
    } else if (j + 1 == nt) {
      s.tm = (c - v[k - nx]) / g.h_theta();
      s.tp = s.tm >= 0.0 ? s.tm : -s.tm;
    } else {
      s.tm = (c - v[k - nx]) / g.h_theta();
      s.tp = (v[k + nx] - c) / g.h_theta();
    }
    return s;
  }

  HJProblem problem_;
  bool sqrt_form_;
  std::vector<double> dbar_;
  std::vector<double> sx_;
  std::vector<double> st_;
  std::vector<double> work_;
  std::vector<double> next_;
};

/// One step of size dt. Throws ConfigError if dt violates the monotone CFL
/// bound evaluated on `field`.
inline ScalarField step_hj(HJProblem& problem, ScalarField field, double dt) {
  Scheme scheme(problem);
  const double limit = scheme.prepare(field);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    throw ConfigError("hj: time step " + std::to_string(dt) + " violates the monotone CFL bound " +
                      std::to_string(limit));
  }
  scheme.advance(field, dt);
  problem.sigma_x = scheme.problem().sigma_x;
  problem.sigma_theta = scheme.problem().sigma_theta;
  return field;
}

struct SolveStats {
  std::size_t steps = 0;
  double min_dt = HUGE_VAL;
  double max_dt = 0.0;
};

/// Evolves `field` from its time to t_final, with adaptive steps (monotone CFL
/// from the current slopes, at most `max_dt`). Returns snapshots at every
/// multiple of `cadence` after the start plus the final time.
inline std::vector<ScalarField> solve(HJProblem& problem, ScalarField field, double t_final,
                                      double cadence, SolveStats* stats = nullptr,
                                      double max_dt = HUGE_VAL) {
  std::vector<ScalarField> out{field};
  if (t_final <= field.time) return out;
  if (!(cadence > 0.0)) cadence = t_final - field.time;
  const double h_cap = 0.5 * problem.grid.h_max();
  max_dt = std::min(max_dt, h_cap);
  Scheme scheme(problem);
  double next_mark = field.time + cadence;
  SolveStats local;
  while (field.time < t_final - 1e-12) {
    const double target = std::min(next_mark, t_final);
    double dt = std::min(scheme.prepare(field), max_dt);
    bool hit = false;
    if (field.time + dt >= target - 1e-12) {
      dt = target - field.time;
      hit = true;
    }
    scheme.advance(field, dt);
    ++local.steps;
    local.min_dt = std::min(local.min_dt, dt);
    local.max_dt = std::max(local.max_dt, dt);
    if (hit) {
      field.time = target;
      out.push_back(field);
      next_mark += cadence;
      if (next_mark > t_final + 1e-12 && target < t_final) next_mark = t_final;
    }
  }
  problem.sigma_x = scheme.problem().sigma_x;
  problem.sigma_theta = scheme.problem().sigma_theta;
  if (stats) *stats = local;
  return out;
}

inline std::vector<ScalarField> solve(HJProblem& problem, double t_final, double cadence,
                                      SolveStats* stats = nullptr) {
  return solve(problem, init_field(problem), t_final, cadence, stats);
}

/// Nodes with value ≤ level + tol.
inline NodeMask zero_set(const ScalarField& field, double level, double tol) {
  NodeMask m(field.grid);
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    m.inside[k] = field.values[k] <= level + tol ? 1 : 0;
  }
  return m;
}

/// Worst violation, on the θ = 0 row, of the viscosity boundary inequalities
/// evaluated with one-sided differences between two snapshots:
///   sup part  max{−u_θ, B} ≥ 0   and   sub part  min{−u_θ, B} ≤ 0,
/// where B = min{u_t + u_θ² + 1, u} (I), u_t + u_θ² + 1 (J, sub part only) or
/// u_t + 2|u_θ| (w). Zero when both hold.
struct BoundaryResidual {
  double super = 0.0;  ///< amount by which max{...} falls below 0
  double sub = 0.0;    ///< amount by which min{...} exceeds 0
  std::size_t worst_node = 0;
};

inline BoundaryResidual boundary_residual(Equation eq, const ScalarField& before,
                                          const ScalarField& after) {
  const HalfPlaneGrid& g = after.grid;
  const double dt = after.time - before.time;
  if (!(dt > 0.0)) throw DomainError("boundary residual needs increasing snapshot times");
  BoundaryResidual r;
  double worst = -1.0;
  for (std::size_t i = 0; i < g.n_x(); ++i) {
    const double u = after.at(i, 0);
    const double ut = (u - before.at(i, 0)) / dt;
    const double ut_theta = (after.at(i, 1) - u) / g.h_theta();
    double b = 0.0;
    switch (eq) {
      case Equation::ObstacleI:
        b = std::min(ut + ut_theta * ut_theta + 1.0, u);
        break;
      case Equation::ActionJ:
        b = ut + ut_theta * ut_theta + 1.0;
        break;
      case Equation::GeometricW:
        b = ut + 2.0 * std::abs(ut_theta);
        break;
    }
    const double sup_violation = eq == Equation::ActionJ ? 0.0 : std::max(0.0, -std::max(-ut_theta, b));
    const double sub_violation = std::max(0.0, std::min(-ut_theta, b));
    r.super = std::max(r.super, sup_violation);
    r.sub = std::max(r.sub, sub_violation);
    if (std::max(sup_violation, sub_violation) > worst) {
      worst = std::max(sup_violation, sub_violation);
      r.worst_node = i;
    }
  }
  return r;
}

}  // namespace canetoads::hj
