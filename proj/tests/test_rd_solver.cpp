#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "canetoads/front.hpp"
#include "canetoads/rd_solver.hpp"

using namespace canetoads;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.grid = HalfPlaneGrid(-1.0, 3.0, 2.5, 81, 41);
  c.epsilon = 0.1;
  return c;
}

}  // namespace

TEST(RDInit, IndicatorWithRamp) {
  const RunConfig c = small_config();
  const rd::RDState s = rd::init_u0(c);
  const HalfPlaneGrid& g = c.grid;
  EXPECT_EQ(s.u.at(0, 0), 1.0);           // (−1, 0): depth 1 inside G₀
  EXPECT_EQ(s.u.at(g.n_x() - 1, 5), 0.0); // far outside
  // along the inward normal from (0, 0.1): ramp in (0, 1), monotone
  double prev = 0.0;
  bool interior_ramp = false;
  for (std::size_t i = 50; i-- > 0;) {
    const double u = s.u.interpolate(g.x(i), 0.1);
    EXPECT_GE(u, prev - 1e-12);
    interior_ramp = interior_ramp || (u > 0.0 && u < 1.0);
    prev = u;
  }
  EXPECT_TRUE(interior_ramp);
}

TEST(RDInit, RampShapes) {
  EXPECT_EQ(rd::ramp_value(0.1, 1.0, RampKind::Smoothstep), 0.0);
  EXPECT_EQ(rd::ramp_value(-2.0, 1.0, RampKind::Cosine), 1.0);
  EXPECT_NEAR(rd::ramp_value(-0.5, 1.0, RampKind::Smoothstep), 0.5, 1e-15);
  EXPECT_NEAR(rd::ramp_value(-0.5, 1.0, RampKind::Cosine), 0.5, 1e-15);
}

TEST(RDCfl, WorkedValue) {
  // θ ∈ [0, 4] so max D̄^ε = 4; h_x = h_θ = 0.05.
  const HalfPlaneGrid g(0.0, 4.0, 4.0, 81, 81);
  const double dt = rd::cfl_dt(g, DiffusionProfile::linear(), 0.1);
  const double expected = 0.9 / (2 * 0.1 * 4 / 0.0025 + 2 * 0.1 / 0.0025 + 10.0);
  EXPECT_NEAR(dt, expected, 1e-15);
  EXPECT_NEAR(dt, 2.195e-3, 1e-6);
}

TEST(RDCfl, CoarserGridLessThanFourTimes) {
  const HalfPlaneGrid fine(0.0, 4.0, 4.0, 81, 81);
  const HalfPlaneGrid coarse(0.0, 4.0, 4.0, 41, 41);
  const double a = rd::cfl_dt(fine, DiffusionProfile::linear(), 0.1);
  const double b = rd::cfl_dt(coarse, DiffusionProfile::linear(), 0.1);
  EXPECT_GT(b, a);
  EXPECT_LT(b, 4.0 * a);
}

TEST(RDCfl, ShrinksLikeEpsilon) {
  const HalfPlaneGrid g(0.0, 4.0, 4.0, 41, 41);
  const double a = rd::cfl_dt(g, DiffusionProfile::linear(), 1e-3);
  const double b = rd::cfl_dt(g, DiffusionProfile::linear(), 1e-4);
  EXPECT_NEAR(b / a, 0.1, 1e-3);
}

TEST(RDStep, Equilibria) {
  rd::RDState s = rd::init_u0(small_config());
  for (double c : {0.0, 1.0}) {
    std::fill(s.u.values.begin(), s.u.values.end(), c);
    rd::RDState r = s;
    for (int k = 0; k < 25; ++k) r = rd::step(r);
    for (double v : r.u.values) EXPECT_EQ(v, c);
  }
}

TEST(RDStep, LogisticHalf) {
  rd::RDState s = rd::init_u0(small_config());
  std::fill(s.u.values.begin(), s.u.values.end(), 0.5);
  const rd::RDState r = rd::step(s);
  const double e = std::exp(s.dt / s.eps);
  const double expected = e / (2.0 * (1.0 + (e - 1.0) / 2.0));
  for (double v : r.u.values) EXPECT_NEAR(v, expected, 1e-15);
  EXPECT_EQ(r.steps, 1u);
}

TEST(RDHopfCole, Values) {
  const double eps = 0.1;
  const HalfPlaneGrid g(0.0, 1.0, 1.0, 4, 4);
  ScalarField u(g, Quantity::U);
  u.values[0] = 1.0;
  u.values[1] = std::exp(-5.0 / eps);
  u.values[2] = 0.0;
  const ScalarField v = rd::hopf_cole(u, eps);
  EXPECT_EQ(v.values[0], 0.0);
  EXPECT_NEAR(v.values[1], 5.0, 1e-12);
  EXPECT_NEAR(v.values[2], -eps * std::log(rd::kUFloor), 1e-12);
  EXPECT_TRUE(std::isfinite(v.values[2]));
}

TEST(RDRun, ResumeIsExact) {
  const rd::RDState s = rd::init_u0(small_config());
  EXPECT_EQ(rd::run_to(s, 0.0).u.values, s.u.values);
  const rd::RDState once = rd::run_to(s, 0.3);
  const rd::RDState twice = rd::run_to(rd::run_to(s, 0.1), 0.3);
  EXPECT_EQ(once.steps, twice.steps);
  EXPECT_EQ(once.u.values, twice.u.values);
  EXPECT_THROW(rd::run_to(once, 0.1), DomainError);
}

TEST(RDRun, FrontAdvances) {
  RunConfig c;  // default grid, ε = 0.1
  rd::RDState s = rd::init_u0(c);
  const double x0 = front::extract_front_all_rows(s.u, 0.5).x;
  s = rd::run_to(s, 0.5);
  const double x1 = front::extract_front_all_rows(s.u, 0.5).x;
  EXPECT_GT(x1, x0);
  EXPECT_EQ(s.u.invariant_violation(), 0.0);
}

TEST(RDRun, SnapshotsAtCadence) {
  RunConfig c = small_config();
  c.t_final = 0.5;
  c.cadence = 0.25;
  rd::RDState s = rd::init_u0(c);
  const auto snaps = rd::run_with_snapshots(s, 0.5, 0.25);
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_NEAR(snaps[1].time, 0.25, 1e-12);
  EXPECT_NEAR(snaps[2].time, 0.5, 1e-12);
}

TEST(RDInit, NeedsFiniteEpsilon) {
  RunConfig c = small_config();
  c.epsilon.reset();
  EXPECT_THROW(rd::init_u0(c), ConfigError);
}
