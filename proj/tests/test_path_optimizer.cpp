#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "canetoads/front.hpp"
#include "canetoads/hj_solver.hpp"
#include "canetoads/path_optimizer.hpp"
#include "oracle.hpp"

using namespace canetoads;

namespace {
const auto kLinear = DiffusionProfile::linear();
const auto kCap = ConvexRegion::half_plane_cap(0.0, 0.2);
}  // namespace

TEST(ActionCost, ConstantPath) {
  const auto tr = path::straight_path({1.0, 0.7}, {1.0, 0.7}, 2.5, 50, 0.0);
  EXPECT_NEAR(path::action_cost(tr, kLinear), -2.5, 1e-14);
  EXPECT_EQ(path::geodesic_length(tr, kLinear), 0.0);
}

TEST(ActionCost, VerticalAndHorizontal) {
  const double t = 1.5;
  const double v = 0.8;
  const auto up = path::straight_path({0.3, 0.2}, {0.3, 0.2 + v * t}, t, 40, 0.0);
  EXPECT_NEAR(path::action_cost(up, kLinear), (v * v / 4 - 1) * t, 1e-13);
  const double c = 1.3;
  const auto side = path::straight_path({0.0, 1.0}, {c * t, 1.0}, t, 40, 0.0);
  EXPECT_NEAR(path::action_cost(side, kLinear), (c * c / 4 - 1) * t, 1e-13);
}

TEST(GeodesicLength, VerticalSegment) {
  const auto up = path::straight_path({0.3, 0.4}, {0.3, 1.1}, 1.0, 40, 0.0);
  EXPECT_NEAR(path::geodesic_length(up, kLinear), 0.35, 1e-13);
}

TEST(GeodesicLength, RefinementConverges) {
  // Smooth curved path: γ(s) = (s, 0.5 + 0.3 sin(πs)).
  auto make = [](std::size_t n) {
    path::Trajectory tr;
    tr.duration = 1.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double s = static_cast<double>(k) / n;
      tr.nodes.push_back({s, 0.5 + 0.3 * std::sin(M_PI * s)});
    }
    return tr;
  };
  const double a = path::geodesic_length(make(200), kLinear);
  const double b = path::geodesic_length(make(400), kLinear);
  EXPECT_LT(std::abs(a - b), 1e-4);
}

TEST(MinimizeAction, InsideRegion) {
  const auto r = path::minimize_action(-0.5, 0.1, 1.3, kLinear, kCap);
  EXPECT_NEAR(r.cost, -1.3, 1e-12);
  EXPECT_EQ(r.path.max_theta(), r.path.min_theta());
}

TEST(MinimizeAction, ClosedFormAtPredictedFront) {
  const double x = 4.0 / 3.0;
  const auto r = path::minimize_action(x, 0.0, 1.0, kLinear, kCap);
  EXPECT_NEAR(r.cost, oracle::action_J(x, 0.0, 1.0, 0.0, 0.2), 5e-3);
  EXPECT_FALSE(r.iteration_limit);
}

TEST(MinimizeAction, RandomProbesAgainstClosedForm) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.05, 3.0), ut(0.0, 2.5), tt(0.5, 2.0);
  for (int k = 0; k < 8; ++k) {
    const double x = ux(rng), th = ut(rng), t = tt(rng);
    const auto r = path::minimize_action(x, th, t, kLinear, kCap);
    const double exact = oracle::action_J(x, th, t, 0.0, 0.2);
    EXPECT_NEAR(r.cost, exact, std::max(5e-3, 5e-3 * std::abs(exact))) << x << " " << th << " " << t;
    EXPECT_LE(r.path.max_theta(), path::trait_bound(r.path, r.cost));
    EXPECT_LE(path::trait_dip(r.path), 1e-9);
  }
}

TEST(MinimizeAction, AgreesWithGrid) {
  hj::HJProblem p;
  p.equation = hj::Equation::ActionJ;
  const ScalarField j = hj::solve(p, 1.0, 1.0).back();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.1, 2.5), ut(0.0, 2.0);
  for (int k = 0; k < 5; ++k) {
    const double x = ux(rng), th = ut(rng);
    const double a = path::minimize_action(x, th, 1.0, kLinear, kCap).cost;
    EXPECT_NEAR(a, j.interpolate(x, th), std::max(0.05, 0.03 * std::abs(a)));
  }
}

TEST(Eikonal, InsideAndAboveCap) {
  path::GeodesicProblem gp;
  gp.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 201, 101);
  const ScalarField d = path::eikonal_distance(gp);
  EXPECT_EQ(d.at(10, 2), 0.0);
  const double h = gp.grid.h_max();
  const std::size_t i = 20;  // x = −0.6
  for (std::size_t j : {20u, 40u, 80u}) {
    const double delta = gp.grid.theta(j) - 0.2;
    EXPECT_NEAR(d.at(i, j), delta / 2.0, 2.0 * h);
  }
}

TEST(Eikonal, AgreesWithPathsAndClosedForm) {
  path::GeodesicProblem gp;
  gp.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 201, 101);
  const ScalarField d = path::eikonal_distance(gp);
  const double h = gp.grid.h_max();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.1, 2.5), ut(0.0, 2.0);
  for (int k = 0; k < 6; ++k) {
    const double x = ux(rng), th = ut(rng);
    const double grid = d.interpolate(x, th);
    const double opt = path::path_distance(x, th, kLinear, kCap);
    EXPECT_NEAR(grid, opt, std::max(2 * h, 0.03 * opt));
    EXPECT_NEAR(opt, oracle::distance(x, th, 0.0, 0.2), 5e-3);
  }
}

TEST(DistanceMask, NestingAndInitialSet) {
  path::GeodesicProblem gp;
  gp.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 101, 51);
  const ScalarField d = path::eikonal_distance(gp);
  const NodeMask m0 = path::w_from_distance(d, 0.0);
  for (std::size_t j = 0; j < gp.grid.n_theta(); ++j)
    for (std::size_t i = 0; i < gp.grid.n_x(); ++i)
      EXPECT_EQ(m0(i, j), kCap.contains(gp.grid.x(i), gp.grid.theta(j)));
  EXPECT_TRUE(path::w_from_distance(d, 0.5).subset_of(path::w_from_distance(d, 0.9)));
}

TEST(DistanceMask, MatchesGeometricSolve) {
  path::GeodesicProblem gp;
  gp.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 201, 101);
  const ScalarField d = path::eikonal_distance(gp);
  hj::HJProblem p;
  p.equation = hj::Equation::GeometricW;
  p.grid = gp.grid;
  const ScalarField w = hj::solve(p, 1.0, 1.0).back();
  const NodeMask a = path::w_from_distance(d, 1.0);
  const NodeMask b = hj::zero_set(w, 0.5, 0.0);
  // the smeared indicator trails the distance set by a cell or two, never leads it
  EXPECT_EQ(front::inclusion_violations(b, a, 1), 0u);
  EXPECT_LE(front::compare_sets(a, b).distance, 2.0);
  double lo = 0.0, hi = 3.0;  // row θ = 0: exact front solves d(x, 0) = 1
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (oracle::distance(mid, 0.0, 0.0, 0.2) <= 1.0 ? lo : hi) = mid;
  }
  const double exact = lo;
  EXPECT_NEAR(front::extract_front(d, 1.0, 0), exact, 3.0 * gp.grid.h_max());
  EXPECT_NEAR(front::extract_front(w, 0.5, 0), exact, 3.0 * gp.grid.h_max());
}
