#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "canetoads/errors.hpp"

namespace canetoads {

struct Point {
  double x = 0.0;
  double theta = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.theta - b.theta); }

/// Closed convex initial support Ḡ₀ in the half-plane θ ≥ 0.
///
/// Two shapes: the left-unbounded strip {x ≤ x_right, 0 ≤ θ ≤ theta_cap}, and a
/// bounded convex polygon. Boundaries are relative to the half-plane, i.e. the
/// θ = 0 line is the domain edge and not part of ∂G₀.
class ConvexRegion {
 public:
  enum class Shape { HalfPlaneCap, Polygon };

  ConvexRegion() : ConvexRegion(half_plane_cap(0.0, 0.2)) {}

  static ConvexRegion half_plane_cap(double x_right, double theta_cap) {
    if (!std::isfinite(x_right)) throw ConfigError("region: x_right must be finite");
    if (!(theta_cap > 0.0) || !std::isfinite(theta_cap)) {
      throw ConfigError("region: theta_cap must be positive");
    }
    ConvexRegion r(Shape::HalfPlaneCap);
    r.x_right_ = x_right;
    r.theta_cap_ = theta_cap;
    return r;
  }

  /// Convex polygon; vertices in either orientation, stored counter-clockwise.
  static ConvexRegion polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) throw ConfigError("region: polygon needs at least 3 vertices");
    double area2 = 0.0;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const Point a = vertices[k];
      const Point b = vertices[(k + 1) % vertices.size()];
      area2 += a.x * b.theta - b.x * a.theta;
      if (!(a.theta >= 0.0)) throw ConfigError("region: polygon vertices must have theta >= 0");
    }
    if (std::abs(area2) < 1e-14) throw ConfigError("region: polygon has empty interior");
    if (area2 < 0) std::reverse(vertices.begin(), vertices.end());
    const std::size_t n = vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = vertices[k];
      const Point b = vertices[(k + 1) % n];
      const Point c = vertices[(k + 2) % n];
      const double turn = (b.x - a.x) * (c.theta - b.theta) - (b.theta - a.theta) * (c.x - b.x);
      if (turn < -1e-12) throw ConfigError("region: polygon is not convex");
    }
    ConvexRegion r(Shape::Polygon);
    r.vertices_ = std::move(vertices);
    r.x_right_ = -HUGE_VAL;
    r.theta_cap_ = 0.0;
    for (const Point& v : r.vertices_) {
      r.x_right_ = std::max(r.x_right_, v.x);
      r.theta_cap_ = std::max(r.theta_cap_, v.theta);
    }
    return r;
  }

  [[nodiscard]] Shape shape() const noexcept { return shape_; }
  /// Right extent: every point satisfies x ≤ x_right().
  [[nodiscard]] double x_right() const noexcept { return x_right_; }
  /// Trait extent: every point satisfies θ ≤ theta_cap().
  [[nodiscard]] double theta_cap() const noexcept { return theta_cap_; }
  /// Left extent (−∞ for the half-plane cap).
  [[nodiscard]] double x_left() const noexcept {
    if (shape_ == Shape::HalfPlaneCap) return -HUGE_VAL;
    double m = HUGE_VAL;
    for (const Point& v : vertices_) m = std::min(m, v.x);
    return m;
  }
  [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }

  [[nodiscard]] bool contains(double x, double theta) const {
    if (shape_ == Shape::HalfPlaneCap) {
      return x <= x_right_ && theta >= 0.0 && theta <= theta_cap_;
    }
    const std::size_t n = vertices_.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = vertices_[k];
      const Point b = vertices_[(k + 1) % n];
      const double cross = (b.x - a.x) * (theta - a.theta) - (b.theta - a.theta) * (x - a.x);
      if (cross < -1e-13 * std::hypot(b.x - a.x, b.theta - a.theta)) return false;
    }
    return true;
  }

  /// Euclidean nearest point of the closed region.
  [[nodiscard]] Point project(double x, double theta) const {
    if (shape_ == Shape::HalfPlaneCap) {
      return {std::min(x, x_right_), std::clamp(theta, 0.0, theta_cap_)};
    }
    if (contains(x, theta)) return {x, theta};
    const Point p{x, theta};
    Point best = vertices_.front();
    double best_d = HUGE_VAL;
    const std::size_t n = vertices_.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Point c = closest_on_segment(vertices_[k], vertices_[(k + 1) % n], p);
      const double d = distance(c, p);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

  /// Positive outside (Euclidean distance to the region), negative inside
  /// (minus the distance to the part of the boundary lying in θ > 0).
  [[nodiscard]] double signed_distance(double x, double theta) const {
    if (!contains(x, theta)) return distance(project(x, theta), {x, theta});
    if (shape_ == Shape::HalfPlaneCap) return -std::min(x_right_ - x, theta_cap_ - theta);
    double depth = HUGE_VAL;
    const std::size_t n = vertices_.size();
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = vertices_[k];
      const Point b = vertices_[(k + 1) % n];
      if (a.theta == 0.0 && b.theta == 0.0) continue;  // lies on the domain edge
      const double len = std::hypot(b.x - a.x, b.theta - a.theta);
      const double cross = (b.x - a.x) * (theta - a.theta) - (b.theta - a.theta) * (x - a.x);
      depth = std::min(depth, cross / len);
    }
    return -depth;
  }

  friend bool operator==(const ConvexRegion&, const ConvexRegion&) = default;

 private:
  explicit ConvexRegion(Shape s) : shape_(s) {}

  static Point closest_on_segment(Point a, Point b, Point p) {
    const double dx = b.x - a.x;
    const double dt = b.theta - a.theta;
    const double len2 = dx * dx + dt * dt;
    const double s = std::clamp(((p.x - a.x) * dx + (p.theta - a.theta) * dt) / len2, 0.0, 1.0);
    return {a.x + s * dx, a.theta + s * dt};
  }

  Shape shape_;
  double x_right_ = 0.0;
  double theta_cap_ = 0.2;
  std::vector<Point> vertices_;
};

inline bool region_contains(const ConvexRegion& r, double x, double theta) {
  return r.contains(x, theta);
}
inline Point region_project(const ConvexRegion& r, double x, double theta) {
  return r.project(x, theta);
}

}  // namespace canetoads
