#pragma once
// Independent closed-form oracle for D̄(θ) = θ and Ḡ₀ = {x ≤ xr, 0 ≤ θ ≤ cap}.
//
// The Lagrangian ẋ²/(4θ) + θ̇²/4 − 1 is jointly convex, so the unique
// Euler–Lagrange extremal joining two points in time t is the minimizer:
//   ẋ = 2aθ,  θ̈ = −2a²,  θ(s) = θ0 + b s − a² s².
// J is the minimum of the extremal cost over endpoints on ∂G₀ (convex in the
// endpoint along each straight edge, so a golden-section search per edge is exact).

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

// Cost of the extremal from (x0, th0) to (x1, th1) in time t.
inline double extremal_cost(double x0, double th0, double x1, double th1, double t) {
  const double dx = x1 - x0;
  // 2 a t ((th0 + th1)/2 + a² t² / 6) = dx, odd and increasing in a
  auto f = [&](double a) { return 2.0 * a * t * (0.5 * (th0 + th1) + a * a * t * t / 6.0) - dx; };
  double lo = 0.0, hi = 1.0;
  const double sgn = dx >= 0 ? 1.0 : -1.0;
  while (sgn * f(sgn * hi) < 0) hi *= 2.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (sgn * f(sgn * mid) < 0) lo = mid; else hi = mid;
  }
  const double a = sgn * 0.5 * (lo + hi);
  const double b = (th1 - th0 + a * a * t * t) / t;
  const double int_theta = th0 * t + b * t * t / 2.0 - a * a * t * t * t / 3.0;
  const double int_v2 = b * b * t - 2.0 * a * a * b * t * t + 4.0 * a * a * a * a * t * t * t / 3.0;
  return a * a * int_theta + int_v2 / 4.0 - t;
}

inline double golden(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < 200; ++k) {
    if (fc < fd) { b = d; d = c; fd = fc; c = b - r * (b - a); fc = f(c); }
    else { a = c; c = d; fc = fd; d = a + r * (b - a); fd = f(d); }
  }
  return std::min({f(lo), f(hi), f(0.5 * (a + b))});
}

// J(x, θ, t) for D̄ = θ and the half-plane cap {x ≤ xr, 0 ≤ θ ≤ cap}.
inline double action_J(double x, double th, double t, double xr, double cap) {
  if (x <= xr && th <= cap) return -t;
  double best = HUGE_VAL;
  if (x > xr) {
    best = golden([&](double e) { return extremal_cost(x, th, xr, e, t); }, 0.0, cap);
  }
  if (th > cap) {
    const double lo = std::min(x, xr) - 10.0;
    best = std::min(best, golden([&](double e) { return extremal_cost(x, th, e, cap, t); }, lo, std::min(x, xr)));
  }
  return best;
}

// Metric distance to the cap region: J + t = d² / t.
inline double distance(double x, double th, double xr, double cap) {
  return std::sqrt(std::max(action_J(x, th, 1.0, xr, cap) + 1.0, 0.0));
}

// x-homogeneous action (G₀ = all x, θ ≤ cap).
inline double action_J_flat(double th, double t, double cap) {
  const double r = std::max(th - cap, 0.0);
  return r * r / (4.0 * t) - t;
}

}  // namespace oracle
