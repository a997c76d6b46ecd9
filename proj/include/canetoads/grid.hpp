#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "canetoads/errors.hpp"

namespace canetoads {

/// Uniform node grid on [x_min, x_max] x [0, theta_max]. Row j = 0 is the
/// θ = 0 boundary; nodes are stored row-major with x varying fastest.
class HalfPlaneGrid {
 public:
  HalfPlaneGrid() = default;

  HalfPlaneGrid(double x_min, double x_max, double theta_max, std::size_t n_x, std::size_t n_theta)
      : x_min_(x_min), x_max_(x_max), theta_max_(theta_max), n_x_(n_x), n_theta_(n_theta) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
      throw ConfigError("grid: x_max must exceed x_min");
    }
    if (!(theta_max > 0.0) || !std::isfinite(theta_max)) {
      throw ConfigError("grid: theta_max must be positive");
    }
    if (n_x < 4 || n_theta < 4) throw ConfigError("grid: at least 4 nodes per direction");
    h_x_ = (x_max - x_min) / static_cast<double>(n_x - 1);
    h_theta_ = theta_max / static_cast<double>(n_theta - 1);
  }

  [[nodiscard]] double x_min() const noexcept { return x_min_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] double theta_max() const noexcept { return theta_max_; }
  [[nodiscard]] std::size_t n_x() const noexcept { return n_x_; }
  [[nodiscard]] std::size_t n_theta() const noexcept { return n_theta_; }
  [[nodiscard]] std::size_t size() const noexcept { return n_x_ * n_theta_; }
  [[nodiscard]] double h_x() const noexcept { return h_x_; }
  [[nodiscard]] double h_theta() const noexcept { return h_theta_; }
  [[nodiscard]] double h_max() const noexcept { return std::max(h_x_, h_theta_); }

  [[nodiscard]] double x(std::size_t i) const noexcept {
    return i + 1 == n_x_ ? x_max_ : x_min_ + static_cast<double>(i) * h_x_;
  }
  [[nodiscard]] double theta(std::size_t j) const noexcept {
    return j + 1 == n_theta_ ? theta_max_ : static_cast<double>(j) * h_theta_;
  }
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept {
    return j * n_x_ + i;
  }

  friend bool operator==(const HalfPlaneGrid&, const HalfPlaneGrid&) = default;

 private:
  double x_min_ = -1.0;
  double x_max_ = 1.0;
  double theta_max_ = 1.0;
  std::size_t n_x_ = 4;
  std::size_t n_theta_ = 4;
  double h_x_ = 2.0 / 3.0;
  double h_theta_ = 1.0 / 3.0;
};

enum class Quantity { U, V, I, J, W, D };

inline std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::U:
      return "u";
    case Quantity::V:
      return "v";
    case Quantity::I:
      return "I";
    case Quantity::J:
      return "J";
    case Quantity::W:
      return "w";
    case Quantity::D:
      return "d";
  }
  return "?";
}

/// Time-stamped nodal values of one quantity on a grid.
struct ScalarField {
  HalfPlaneGrid grid;
  std::vector<double> values;
  double time = 0.0;
  Quantity tag = Quantity::U;

  ScalarField() = default;
  ScalarField(HalfPlaneGrid g, Quantity q, double t = 0.0, double fill = 0.0)
      : grid(g), values(g.size(), fill), time(t), tag(q) {}

  [[nodiscard]] double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }

  /// Bilinear interpolation; clamps to the grid rectangle.
  [[nodiscard]] double interpolate(double x, double theta) const {
    const double fx = std::clamp((x - grid.x_min()) / grid.h_x(), 0.0,
                                 static_cast<double>(grid.n_x() - 1));
    const double ft = std::clamp(theta / grid.h_theta(), 0.0,
                                 static_cast<double>(grid.n_theta() - 1));
    const auto i = std::min(static_cast<std::size_t>(fx), grid.n_x() - 2);
    const auto j = std::min(static_cast<std::size_t>(ft), grid.n_theta() - 2);
    const double a = fx - static_cast<double>(i);
    const double b = ft - static_cast<double>(j);
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) + (1 - a) * b * at(i, j + 1) +
           a * b * at(i + 1, j + 1);
  }

  /// Largest violation of the range invariant implied by the tag
  /// (u, w in [0,1]; v, I, d >= 0; J >= -time). Zero when satisfied.
  [[nodiscard]] double invariant_violation() const {
    double worst = 0.0;
    for (double v : values) {
      if (std::isnan(v)) return HUGE_VAL;
      switch (tag) {
        case Quantity::U:
        case Quantity::W:
          worst = std::max({worst, -v, v - 1.0});
          break;
        case Quantity::V:
        case Quantity::I:
        case Quantity::D:
          worst = std::max(worst, -v);
          break;
        case Quantity::J:
          worst = std::max(worst, -time - v);
          break;
      }
    }
    return worst;
  }
};

/// Boolean node set on a grid.
struct NodeMask {
  HalfPlaneGrid grid;
  std::vector<std::uint8_t> inside;

  NodeMask() = default;
  explicit NodeMask(HalfPlaneGrid g) : grid(g), inside(g.size(), 0) {}

  [[nodiscard]] bool operator()(std::size_t i, std::size_t j) const {
    return inside[grid.index(i, j)] != 0;
  }
  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
  }
  [[nodiscard]] bool empty() const { return count() == 0; }
  /// Every node of *this is also in `other`.
  [[nodiscard]] bool subset_of(const NodeMask& other) const {
    for (std::size_t k = 0; k < inside.size(); ++k) {
      if (inside[k] && !other.inside[k]) return false;
    }
    return true;
  }

  friend bool operator==(const NodeMask&, const NodeMask&) = default;
};

}  // namespace canetoads
