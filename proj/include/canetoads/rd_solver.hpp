#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "canetoads/config.hpp"
#include "canetoads/diffusion.hpp"
#include "canetoads/errors.hpp"
#include "canetoads/grid.hpp"

namespace canetoads::rd {

/// Scaled population density u^ε on the truncated half-plane.
///
/// The clock is `start_time + steps * dt`, never accumulated, so that stopping
/// and resuming a run reproduces an uninterrupted run exactly.
struct RDState {
  ScalarField u;
  double eps = 0.1;
  DiffusionProfile profile = DiffusionProfile::linear();
  std::size_t steps = 0;
  double dt = 0.0;
  double start_time = 0.0;

  [[nodiscard]] double time() const { return start_time + static_cast<double>(steps) * dt; }
};

/// Value of the mollified indicator at signed distance `sd` from ∂G₀ with ramp
/// width `width`: 1 at depth ≥ width, 0 outside, monotone in between.
inline double ramp_value(double sd, double width, RampKind kind) {
  if (sd >= 0.0) return 0.0;
  const double r = std::min(-sd / width, 1.0);
  switch (kind) {
    case RampKind::Smoothstep:
      return r * r * (3.0 - 2.0 * r);
    case RampKind::Cosine:
      return 0.5 * (1.0 - std::cos(M_PI * r));
  }
  return r;
}

/// Largest stable step, 0.9 / (2ε max D̄^ε / h_x² + 2ε / h_θ² + 1/ε).
inline double cfl_dt(const HalfPlaneGrid& grid, const DiffusionProfile& profile, double eps) {
  double d_max = 0.0;
  for (std::size_t j = 0; j < grid.n_theta(); ++j) {
    d_max = std::max(d_max, profile.rescaled(grid.theta(j), eps));
  }
  const double hx2 = grid.h_x() * grid.h_x();
  const double ht2 = grid.h_theta() * grid.h_theta();
  return 0.9 / (2.0 * eps * d_max / hx2 + 2.0 * eps / ht2 + 1.0 / eps);
}

inline double cfl_dt(const RDState& state) { return cfl_dt(state.u.grid, state.profile, state.eps); }

/// Initial state: u₀ = 1 at depth ≥ δ inside G₀, smooth ramp to 0 on ∂G₀, 0
/// outside, with δ = u0_width_cells · max(h_x, h_θ). The time step is the CFL
/// bound shrunk so that it divides the snapshot cadence.
inline RDState init_u0(const RunConfig& cfg) {
  validate(cfg);
  if (!cfg.epsilon) throw ConfigError("run.epsilon: reaction-diffusion runs need a finite epsilon");
  const HalfPlaneGrid& g = cfg.grid;
  RDState s;
  s.eps = *cfg.epsilon;
  s.profile = cfg.profile;
  s.u = ScalarField(g, Quantity::U);
  const double width = cfg.u0_width_cells * g.h_max();
  bool any_interior = false;
  for (std::size_t j = 0; j < g.n_theta(); ++j) {
    for (std::size_t i = 0; i < g.n_x(); ++i) {
      const double sd = cfg.region.signed_distance(g.x(i), g.theta(j));
      s.u.at(i, j) = ramp_value(sd, width, cfg.u0_ramp);
      any_interior = any_interior || sd < 0.0;
    }
  }
  if (!any_interior) throw ConfigError("region: no grid node lies in the interior of G0");
  const double bound = cfl_dt(g, s.profile, s.eps);
  s.dt = cfg.cadence / std::ceil(cfg.cadence / bound);
  return s;
}

/// Advances u by one explicit diffusion step followed by the exact logistic
/// update. Boundaries are reflecting (θ = 0 and the artificial edges).
class Stepper {
 public:
  explicit Stepper(const RDState& s)
      : grid_(s.u.grid), coef_x_(grid_.n_theta()), scratch_(grid_.size()) {
    if (!(s.dt > 0.0)) throw ConfigError("rd: time step must be positive");
    const double limit = cfl_dt(s);
    if (s.dt > limit * (1.0 + 1e-12)) {
      throw ConfigError("rd: time step " + std::to_string(s.dt) + " exceeds CFL bound " +
                        std::to_string(limit));
    }
    for (std::size_t j = 0; j < grid_.n_theta(); ++j) {
      coef_x_[j] = s.eps * s.profile.rescaled(grid_.theta(j), s.eps) * s.dt / (grid_.h_x() * grid_.h_x());
    }
    coef_theta_ = s.eps * s.dt / (grid_.h_theta() * grid_.h_theta());
    growth_ = std::exp(s.dt / s.eps);
  }

  void advance(RDState& s) {
    const std::size_t nx = grid_.n_x();
    const std::size_t nt = grid_.n_theta();
    const std::vector<double>& u = s.u.values;
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t jm = j == 0 ? 1 : j - 1;
      const std::size_t jp = j + 1 == nt ? nt - 2 : j + 1;
      const double* row = &u[j * nx];
      const double* below = &u[jm * nx];
      const double* above = &u[jp * nx];
      double* out = &scratch_[j * nx];
      const double cx = coef_x_[j];
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t im = i == 0 ? 1 : i - 1;
        const std::size_t ip = i + 1 == nx ? nx - 2 : i + 1;
        const double c = row[i];
        const double diffused =
            c + cx * (row[ip] - 2.0 * c + row[im]) + coef_theta_ * (above[i] - 2.0 * c + below[i]);
        out[i] = diffused * growth_ / (1.0 + diffused * (growth_ - 1.0));
      }
    }
    for (std::size_t k = 0; k < scratch_.size(); ++k) {
      if (!std::isfinite(scratch_[k])) {
        throw NumericalError("rd: non-finite value at node (i=" + std::to_string(k % nx) +
                             ", j=" + std::to_string(k / nx) + ") after step " +
                             std::to_string(s.steps + 1));
      }
    }
    s.u.values.swap(scratch_);
    ++s.steps;
    s.u.time = s.time();
  }

 private:
  HalfPlaneGrid grid_;
  std::vector<double> coef_x_;
  double coef_theta_ = 0.0;
  double growth_ = 1.0;
  std::vector<double> scratch_;
};

inline RDState step(RDState state) {
  Stepper(state).advance(state);
  return state;
}

/// Steps until the clock reaches t (first step time ≥ t); calls `on_step`
/// after every step.
inline RDState run_to(RDState state, double t,
                      const std::function<void(const RDState&)>& on_step = {}) {
  if (t < state.time() - 1e-12) throw DomainError("rd: cannot run backwards in time");
  if (t <= state.time()) return state;
  Stepper stepper(state);
  const auto target = static_cast<std::size_t>(std::ceil((t - state.start_time) / state.dt - 1e-9));
  while (state.steps < target) {
    stepper.advance(state);
    if (on_step) on_step(state);
  }
  return state;
}

/// Runs to t and returns the u-fields at every multiple of `cadence`
/// (including the initial one).
inline std::vector<ScalarField> run_with_snapshots(RDState& state, double t, double cadence) {
  std::vector<ScalarField> out{state.u};
  const auto per_snapshot = static_cast<std::size_t>(std::llround(cadence / state.dt));
  if (per_snapshot == 0 || std::abs(per_snapshot * state.dt - cadence) > 1e-9 * cadence) {
    throw ConfigError("run.cadence: time step does not divide the snapshot cadence");
  }
  state = run_to(state, t, [&](const RDState& s) {
    if (s.steps % per_snapshot == 0) out.push_back(s.u);
  });
  return out;
}

inline constexpr double kUFloor = 1e-300;

/// Hopf–Cole field v = −ε log max(u, 1e-300) ≥ 0.
inline ScalarField hopf_cole(const ScalarField& u, double eps) {
  ScalarField v(u.grid, Quantity::V, u.time);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    v.values[k] = std::max(0.0, -eps * std::log(std::max(u.values[k], kUFloor)));
  }
  return v;
}

inline ScalarField hopf_cole(const RDState& state) { return hopf_cole(state.u, state.eps); }

}  // namespace canetoads::rd
