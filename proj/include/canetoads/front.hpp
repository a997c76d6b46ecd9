#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "canetoads/errors.hpp"
#include "canetoads/grid.hpp"

namespace canetoads::front {

/// Which field a front was read from.
enum class Source { ULevel, IZero, JZero, WZero, DReach };

inline std::string to_string(Source s) {
  switch (s) {
    case Source::ULevel:
      return "u-level";
    case Source::IZero:
      return "I-zero";
    case Source::JZero:
      return "J-zero";
    case Source::WZero:
      return "w-zero";
    case Source::DReach:
      return "d-reach";
  }
  return "?";
}

inline Source source_of(Quantity q) {
  switch (q) {
    case Quantity::U:
      return Source::ULevel;
    case Quantity::I:
    case Quantity::V:
      return Source::IZero;
    case Quantity::J:
      return Source::JZero;
    case Quantity::W:
      return Source::WZero;
    case Quantity::D:
      return Source::DReach;
  }
  return Source::JZero;
}

/// Default extraction level: 0.5 for u and w, 0 for v, I, J.
/// For d the level is the time itself ({d ≤ t}).
inline double default_level(const ScalarField& f) {
  switch (f.tag) {
    case Quantity::U:
    case Quantity::W:
      return 0.5;
    case Quantity::D:
      return f.time;
    default:
      return 0.0;
  }
}

/// The invaded side of a level: u ≥ level for u, value ≤ level otherwise
/// (w = 0 is invaded, w = 1 is not).
inline bool invaded(Quantity tag, double value, double level) {
  return tag == Quantity::U ? value >= level : value <= level;
}

/// Rightmost crossing of `level` on row j, by linear interpolation between the
/// last invaded node and its right neighbour. Throws OutOfDomainError when the
/// row has no invaded node or the invaded set reaches x_max.
inline double extract_front(const ScalarField& field, double level, std::size_t row) {
  const HalfPlaneGrid& g = field.grid;
  if (row >= g.n_theta()) throw DomainError("extract_front: row outside the grid");
  const std::size_t nx = g.n_x();
  std::optional<std::size_t> last;
  for (std::size_t i = nx; i-- > 0;) {
    if (invaded(field.tag, field.at(i, row), level)) {
      last = i;
      break;
    }
  }
  if (!last) {
    throw OutOfDomainError("no invaded node on row " + std::to_string(row) + " at level " +
                           std::to_string(level));
  }
  if (*last + 1 == nx) {
    throw OutOfDomainError("front on row " + std::to_string(row) +
                           " is not inside the domain (invaded set reaches x_max)");
  }
  const std::size_t i = *last;
  const double a = field.at(i, row);
  const double b = field.at(i + 1, row);
  double r = b != a ? (level - a) / (b - a) : 0.0;
  r = std::clamp(r, 0.0, 1.0);
  return g.x(i) + r * (g.x(i + 1) - g.x(i));
}

inline double extract_front(const ScalarField& field, std::size_t row = 0) {
  return extract_front(field, default_level(field), row);
}

struct RowFront {
  double x = -HUGE_VAL;
  std::size_t row = 0;
};

/// Largest per-row front over all rows that have one: the right edge of the
/// invaded set as a subset of the (x, θ) half-plane.
inline RowFront extract_front_all_rows(const ScalarField& field, double level) {
  RowFront best;
  bool any = false;
  for (std::size_t j = 0; j < field.grid.n_theta(); ++j) {
    const std::size_t nx = field.grid.n_x();
    if (invaded(field.tag, field.at(nx - 1, j), level)) {
      throw OutOfDomainError("front on row " + std::to_string(j) + " reaches x_max");
    }
    try {
      const double x = extract_front(field, level, j);
      if (!any || x > best.x) best = {x, j};
      any = true;
    } catch (const OutOfDomainError&) {
    }
  }
  if (!any) throw OutOfDomainError("no invaded node in the field");
  return best;
}

/// Per-row fronts; NaN for rows without a crossing.
inline std::vector<double> row_fronts(const ScalarField& field, double level) {
  std::vector<double> out(field.grid.n_theta(), std::nan(""));
  for (std::size_t j = 0; j < out.size(); ++j) {
    try {
      out[j] = extract_front(field, level, j);
    } catch (const OutOfDomainError&) {
    }
  }
  return out;
}

/// Sampled front abscissa x_front(t_i).
struct FrontCurve {
  std::vector<double> t;
  std::vector<double> x;
  Source source = Source::JZero;
  double level = 0.0;
  double tol = 0.0;

  /// t strictly increasing and x nondecreasing.
  [[nodiscard]] bool monotone() const {
    for (std::size_t k = 1; k < t.size(); ++k) {
      if (!(t[k] > t[k - 1]) || x[k] < x[k - 1]) return false;
    }
    return true;
  }
};

/// Which row a front curve is read on.
struct RowChoice {
  /// Empty: supremum over all rows.
  std::optional<std::size_t> row;
};

/// Front curve from snapshots, skipping those with time ≤ 0.
inline FrontCurve front_curve(const std::vector<ScalarField>& snapshots, RowChoice choice = {},
                              std::optional<double> level = std::nullopt) {
  FrontCurve c;
  if (snapshots.empty()) return c;
  c.source = source_of(snapshots.front().tag);
  for (const ScalarField& f : snapshots) {
    if (!(f.time > 0.0)) continue;
    const double lv = level.value_or(default_level(f));
    c.level = lv;
    c.t.push_back(f.time);
    c.x.push_back(choice.row ? extract_front(f, lv, *choice.row) : extract_front_all_rows(f, lv).x);
  }
  return c;
}

enum class LawForm { Power, PowerSqrtLog };

/// x ≈ c t^α, or x ≈ c t^α sqrt(log t) with α fixed.
struct LawFit {
  double c = 0.0;
  double alpha = 0.0;
  bool log_correction = false;
  /// Root mean square of the residuals in log x.
  double residual = 0.0;

  [[nodiscard]] bool in_sanity_window() const { return c > 0.0 && alpha > 0.5 && alpha < 3.0; }
};

inline LawFit fit_law(const FrontCurve& curve, LawForm form, double fixed_alpha = 1.5) {
  const std::size_t n = curve.t.size();
  if (n < 4 || curve.x.size() != n) throw DomainError("fit_law: need at least 4 samples");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(curve.t[k] > 0.0) || !(curve.x[k] > 0.0)) throw DomainError("fit_law: samples must be positive");
  }
  LawFit fit;
  if (form == LawForm::Power) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double lx = std::log(curve.t[k]);
      const double ly = std::log(curve.x[k]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    const double den = dn * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) throw DomainError("fit_law: sample times are not distinct");
    fit.alpha = (dn * sxy - sx * sy) / den;
    fit.c = std::exp((sy - fit.alpha * sx) / dn);
  } else {
    double num = 0, den = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!(curve.t[k] > 1.0)) throw DomainError("fit_law: sqrt-log form needs t > 1");
      const double b = std::pow(curve.t[k], fixed_alpha) * std::sqrt(std::log(curve.t[k]));
      num += b * curve.x[k];
      den += b * b;
    }
    fit.alpha = fixed_alpha;
    fit.c = num / den;
    fit.log_correction = true;
  }
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double model = fit.c * std::pow(curve.t[k], fit.alpha);
    if (fit.log_correction) model *= std::sqrt(std::log(curve.t[k]));
    const double r = std::log(curve.x[k]) - std::log(model);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

/// Nodes of the mask with at least one in-grid 8-neighbour outside it.
inline std::vector<std::size_t> boundary_nodes(const NodeMask& m) {
  const HalfPlaneGrid& g = m.grid;
  const auto nx = static_cast<long>(g.n_x());
  const auto nt = static_cast<long>(g.n_theta());
  std::vector<std::size_t> out;
  for (long j = 0; j < nt; ++j) {
    for (long i = 0; i < nx; ++i) {
      if (!m.inside[static_cast<std::size_t>(j * nx + i)]) continue;
      bool edge = false;
      for (long dj = -1; dj <= 1 && !edge; ++dj) {
        for (long di = -1; di <= 1 && !edge; ++di) {
          const long a = i + di;
          const long b = j + dj;
          if (a < 0 || b < 0 || a >= nx || b >= nt) continue;
          edge = !m.inside[static_cast<std::size_t>(b * nx + a)];
        }
      }
      if (edge) out.push_back(static_cast<std::size_t>(j * nx + i));
    }
  }
  return out;
}

struct SetComparison {
  /// Symmetric Hausdorff distance of the mask boundaries in units of
  /// max(h_x, h_θ); +∞ if either mask is empty.
  double distance = 0.0;
  std::string warning;
};

inline SetComparison compare_sets(const NodeMask& a, const NodeMask& b) {
  if (!(a.grid == b.grid)) throw DomainError("compare_sets: masks live on different grids");
  SetComparison out;
  if (a.empty() || b.empty()) {
    out.distance = HUGE_VAL;
    out.warning = a.empty() ? "first mask is empty" : "second mask is empty";
    return out;
  }
  const HalfPlaneGrid& g = a.grid;
  const std::vector<std::size_t> ba = boundary_nodes(a);
  const std::vector<std::size_t> bb = boundary_nodes(b);
  if (ba.empty() != bb.empty()) {
    out.distance = HUGE_VAL;
    out.warning = "one mask covers the whole grid";
    return out;
  }
  auto directed = [&](const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
    double worst = 0.0;
    for (std::size_t k : p) {
      const double x = g.x(k % g.n_x());
      const double t = g.theta(k / g.n_x());
      double best = HUGE_VAL;
      for (std::size_t l : q) {
        const double dx = x - g.x(l % g.n_x());
        const double dt = t - g.theta(l / g.n_x());
        best = std::min(best, dx * dx + dt * dt);
        if (best <= worst) break;
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  out.distance = std::max(directed(ba, bb), directed(bb, ba)) / g.h_max();
  return out;
}

/// Nodes of `a` farther than `cells` (Chebyshev, in node steps) from every node of `b`.
inline std::size_t inclusion_violations(const NodeMask& a, const NodeMask& b, std::size_t cells) {
  const HalfPlaneGrid& g = a.grid;
  const auto nx = static_cast<long>(g.n_x());
  const auto nt = static_cast<long>(g.n_theta());
  const auto c = static_cast<long>(cells);
  std::size_t bad = 0;
  for (long j = 0; j < nt; ++j) {
    for (long i = 0; i < nx; ++i) {
      const auto k = static_cast<std::size_t>(j * nx + i);
      if (!a.inside[k] || b.inside[k]) continue;
      bool near = false;
      for (long dj = -c; dj <= c && !near; ++dj) {
        for (long di = -c; di <= c && !near; ++di) {
          const long p = i + di;
          const long q = j + dj;
          if (p < 0 || q < 0 || p >= nx || q >= nt) continue;
          near = b.inside[static_cast<std::size_t>(q * nx + p)] != 0;
        }
      }
      if (!near) ++bad;
    }
  }
  return bad;
}

/// max over nodes of tanh(I) − w; nonpositive when tanh(I) ≤ w everywhere.
inline double tanh_excess(const ScalarField& i_field, const ScalarField& w_field) {
  if (!(i_field.grid == w_field.grid)) throw DomainError("tanh_excess: fields on different grids");
  double worst = -HUGE_VAL;
  for (std::size_t k = 0; k < i_field.values.size(); ++k) {
    worst = std::max(worst, std::tanh(i_field.values[k]) - w_field.values[k]);
  }
  return worst;
}

}  // namespace canetoads::front
