#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "canetoads/front.hpp"
#include "canetoads/hj_solver.hpp"
#include "oracle.hpp"

using namespace canetoads;
using hj::Equation;

namespace {

hj::HJProblem flat_problem(Equation eq, double cap = 0.5) {
  hj::HJProblem p;
  p.equation = eq;
  p.grid = HalfPlaneGrid(-1.0, 1.0, 2.5, 41, 201);
  p.region = ConvexRegion::half_plane_cap(10.0, cap);  // all x, θ ≤ cap
  return p;
}

const ScalarField& at(const std::vector<ScalarField>& s, double t) {
  for (const auto& f : s)
    if (std::abs(f.time - t) < 1e-9) return f;
  throw std::runtime_error("missing snapshot");
}

}  // namespace

TEST(HJInit, TagConventions) {
  hj::HJProblem p;
  for (Equation eq : {Equation::ObstacleI, Equation::ActionJ, Equation::GeometricW}) {
    p.equation = eq;
    const ScalarField f = hj::init_field(p);
    EXPECT_EQ(f.at(0, 0), 0.0);
    const double far = f.at(p.grid.n_x() - 1, p.grid.n_theta() - 1);
    EXPECT_EQ(far, eq == Equation::GeometricW ? 1.0 : p.cap);
  }
}

TEST(HJHamiltonian, ZeroSlopes) {
  EXPECT_EQ(hj::hamiltonian(Equation::ObstacleI, 0.7, 0, 0), 1.0);
  EXPECT_EQ(hj::hamiltonian(Equation::GeometricW, 0.7, 0, 0), 0.0);
}

TEST(HJHamiltonian, DegenerateRow) {
  hj::HJProblem p;
  p.equation = Equation::ObstacleI;
  const double q = 3.7;
  EXPECT_EQ(hj::numerical_hamiltonian(p, 0.0, q, q, 0.0, 0.0), 1.0);
}

TEST(HJHamiltonian, LaxFriedrichsDissipation) {
  const double h = hj::numerical_hamiltonian(Equation::ActionJ, 1.0, 0.0, 2.0, 0.0, 0.0, 3.0, 0.0);
  EXPECT_DOUBLE_EQ(h, 1.0 + 1.0 - 0.5 * 3.0 * 2.0);
}

TEST(HJStep, ObstacleStaysZero) {
  hj::HJProblem p = flat_problem(Equation::ObstacleI);
  ScalarField f(p.grid, Quantity::I);
  for (int k = 0; k < 5; ++k) f = hj::step_hj(p, f, 0.01);
  for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(HJStep, ActionPureSource) {
  hj::HJProblem p = flat_problem(Equation::ActionJ);
  ScalarField f(p.grid, Quantity::J);
  const double dt = 0.004;
  f = hj::step_hj(p, f, dt);
  for (double v : f.values) EXPECT_NEAR(v, -dt, 1e-15);
}

TEST(HJStep, RejectsCflViolation) {
  hj::HJProblem p;
  p.equation = Equation::GeometricW;
  ScalarField f = hj::init_field(p);
  EXPECT_THROW(hj::step_hj(p, f, 1.0), ConfigError);
}

TEST(HJSolve, ZeroHorizon) {
  hj::HJProblem p = flat_problem(Equation::ActionJ);
  const ScalarField f0 = hj::init_field(p);
  const auto s = hj::solve(p, f0, 0.0, 0.1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].values, f0.values);
}

TEST(HJSolve, GeometricFrontSpeedTwo) {
  // x-homogeneous data: the level set moves straight up at speed 2.
  hj::HJProblem p = flat_problem(Equation::GeometricW, 0.3);
  const auto s = hj::solve(p, 0.8, 0.2);
  const std::size_t mid = p.grid.n_x() / 2;
  for (double t : {0.2, 0.4, 0.8}) {
    const ScalarField& w = at(s, t);
    double top = 0.0;
    for (std::size_t j = 0; j < p.grid.n_theta(); ++j) {
      if (w.at(mid, j) <= 0.5) top = p.grid.theta(j);
    }
    EXPECT_NEAR(top, 0.3 + 2.0 * t, 3.0 * p.grid.h_theta()) << "t=" << t;
  }
}

TEST(HJSolve, FlatActionMatchesHopfLax) {
  hj::HJProblem p = flat_problem(Equation::ActionJ);
  hj::SolveStats st;
  const auto s = hj::solve(p, 2.0, 0.5, &st);
  const double tol = 5.0 * std::max(p.grid.h_theta(), st.max_dt);
  for (double t : {0.5, 1.0, 2.0}) {
    const ScalarField& f = at(s, t);
    double worst = 0.0;
    for (std::size_t j = 0; j < p.grid.n_theta(); ++j)
      for (std::size_t i = 0; i < p.grid.n_x(); ++i)
        worst = std::max(worst, std::abs(f.at(i, j) - oracle::action_J_flat(p.grid.theta(j), t, 0.5)));
    EXPECT_LE(worst, tol) << "t=" << t;
  }
}

TEST(HJSolve, ObstacleIsPositivePartOfAction) {
  hj::HJProblem pi = flat_problem(Equation::ObstacleI);
  hj::HJProblem pj = flat_problem(Equation::ActionJ);
  hj::SolveStats st;
  const auto si = hj::solve(pi, 1.0, 0.5, &st);
  const auto sj = hj::solve(pj, 1.0, 0.5);
  const double tol = 5.0 * std::max(pi.grid.h_theta(), st.max_dt);
  for (std::size_t k = 0; k < si.back().values.size(); ++k) {
    EXPECT_NEAR(si.back().values[k], std::max(sj.back().values[k], 0.0), tol);
  }
}

TEST(HJZeroSet, InitialAndEmpty) {
  hj::HJProblem p;
  p.equation = Equation::ObstacleI;
  p.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 81, 51);
  const ScalarField f = hj::init_field(p);
  const NodeMask m = hj::zero_set(f, 0.0, 0.0);
  for (std::size_t j = 0; j < p.grid.n_theta(); ++j)
    for (std::size_t i = 0; i < p.grid.n_x(); ++i)
      EXPECT_EQ(m(i, j), p.region.contains(p.grid.x(i), p.grid.theta(j)));
  ScalarField full = f;
  std::fill(full.values.begin(), full.values.end(), p.cap);
  EXPECT_TRUE(hj::zero_set(full, 0.0, 1.0).empty());
}

TEST(HJSolve, DefaultActionFrontMatchesClosedForm) {
  // Row θ = 0 at t = 1; the exact front solves J(x, 0, 1) = 0.
  hj::HJProblem p;
  p.equation = Equation::ActionJ;
  const ScalarField f = hj::solve(p, 1.0, 1.0).back();
  double lo = 0.5, hi = 2.0;
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    (oracle::action_J(mid, 0.0, 1.0, 0.0, 0.2) <= 0.0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(front::extract_front(f, 0.0, 0), lo, 0.07);
}

TEST(HJSolve, RangeInvariants) {
  hj::HJProblem p;
  p.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 81, 51);
  for (Equation eq : {Equation::ObstacleI, Equation::ActionJ, Equation::GeometricW}) {
    p.equation = eq;
    for (const auto& f : hj::solve(p, 1.0, 0.25)) EXPECT_EQ(f.invariant_violation(), 0.0);
  }
}
