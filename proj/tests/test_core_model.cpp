#include <cmath>

#include <gtest/gtest.h>

#include "canetoads/config.hpp"
#include "canetoads/diffusion.hpp"
#include "canetoads/grid.hpp"
#include "canetoads/region.hpp"

using namespace canetoads;

TEST(Diffusion, LinearIsIdentity) {
  EXPECT_EQ(eval_D(DiffusionProfile::linear(), 3.0), 3.0);
  EXPECT_EQ(eval_D_limit(DiffusionProfile::linear(), 7.0), 7.0);
}

TEST(Diffusion, OscillatingLogValues) {
  const auto p = DiffusionProfile::oscillating_log();
  EXPECT_EQ(eval_D(p, 0.0), 0.0);
  EXPECT_GT(eval_D(p, 1e-6), 0.0);
  // direct arithmetic
  const double expected = 2.0 * (1.0 + std::log(3.0) + std::sin(2.0) / 2.0);
  EXPECT_NEAR(eval_D(p, 2.0), expected, 1e-14);
  EXPECT_EQ(eval_D_limit(p, 7.0), 7.0);
}

TEST(Diffusion, LimitVanishesAtZero) {
  EXPECT_EQ(eval_D_limit(DiffusionProfile::linear(), 0.0), 0.0);
  EXPECT_EQ(eval_D_limit(DiffusionProfile::oscillating_log(), 0.0), 0.0);
  EXPECT_EQ(eval_D_limit(DiffusionProfile::power_law(2.0), 0.0), 0.0);
  EXPECT_EQ(eval_D_limit(DiffusionProfile::tabulated({0, 1, 2}, {0, 1, 4}, 2.0), 0.0), 0.0);
}

TEST(Diffusion, ScaleInvariantProfiles) {
  EXPECT_EQ(eval_D_eps(DiffusionProfile::linear(), 5.0, 0.01), 5.0);
  EXPECT_DOUBLE_EQ(eval_D_eps(DiffusionProfile::power_law(2.0), 3.0, 0.1), 9.0);
}

TEST(Diffusion, RescaledOscillatingAtTwo) {
  // D(θ/ε)/D(1/ε) evaluated independently; convergence to 2 is logarithmic in ε.
  const double eps = 1e-6;
  auto d = [](double s) { return s * (1.0 + std::log(s + 1.0) + std::sin(s) / 2.0); };
  const double expected = d(2.0 / eps) / d(1.0 / eps);
  const double got = eval_D_eps(DiffusionProfile::oscillating_log(), 2.0, eps);
  EXPECT_NEAR(got, expected, 1e-12);
  EXPECT_LT(std::abs(got - 2.0), 0.2);
  EXPECT_EQ(eval_D_eps(DiffusionProfile::oscillating_log(), 1.0, eps), 1.0);
}

TEST(Diffusion, RejectsNegativeTheta) {
  EXPECT_THROW(eval_D(DiffusionProfile::linear(), -0.1), DomainError);
  EXPECT_THROW(eval_D_eps(DiffusionProfile::linear(), 1.0, 0.0), DomainError);
}

TEST(Diffusion, TabulatedWithoutLimit) {
  const auto p = DiffusionProfile::tabulated({0, 1, 2}, {0.1, 1, 3});
  EXPECT_FALSE(p.has_limit());
  EXPECT_THROW((void)p.limit(1.0), UnsupportedError);
  EXPECT_NEAR(p(1.5), 2.0, 1e-15);
  EXPECT_THROW(DiffusionProfile::tabulated({0, 1}, {1, 1}), DomainError);
}

TEST(Diffusion, LimitDerivatives) {
  const auto p = DiffusionProfile::power_law(3.0);
  EXPECT_DOUBLE_EQ(p.limit_derivative(2.0), 12.0);
  EXPECT_DOUBLE_EQ(p.limit_second_derivative(2.0), 12.0);
  EXPECT_EQ(DiffusionProfile::linear().limit_second_derivative(1.0), 0.0);
}

TEST(Region, CapContainsAndProjects) {
  const auto r = ConvexRegion::half_plane_cap(0.0, 0.5);
  EXPECT_TRUE(r.contains(-1.0, 0.2));
  Point p = r.project(-1.0, 0.2);
  EXPECT_EQ(p.x, -1.0);
  EXPECT_EQ(p.theta, 0.2);
  p = r.project(2.0, 0.2);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.theta, 0.2);
  p = r.project(1.0, 1.5);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.theta, 0.5);
  EXPECT_FALSE(r.contains(0.1, 0.1));
}

TEST(Region, PolygonOrientationAndConvexity) {
  const auto r = ConvexRegion::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});  // clockwise input
  EXPECT_TRUE(r.contains(0.5, 0.5));
  EXPECT_NEAR(r.signed_distance(0.5, 0.5), -0.5, 1e-15);
  EXPECT_NEAR(r.signed_distance(2.0, 0.5), 1.0, 1e-15);
  EXPECT_THROW(ConvexRegion::polygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 1}, {0, 1}}), ConfigError);
  EXPECT_THROW(ConvexRegion::polygon({{0, 0}, {1, -0.1}, {1, 1}}), ConfigError);
}

TEST(Grid, SpacingAndIndexing) {
  const HalfPlaneGrid g(-1.0, 3.0, 2.5, 401, 201);
  EXPECT_NEAR(g.h_x(), 0.01, 1e-15);
  EXPECT_NEAR(g.h_theta(), 0.0125, 1e-15);
  EXPECT_EQ(g.index(3, 2), 2u * 401u + 3u);
  EXPECT_THROW(HalfPlaneGrid(0.0, 0.0, 1.0, 10, 10), ConfigError);
}

TEST(Grid, FieldInterpolationAndInvariants) {
  const HalfPlaneGrid g(0.0, 1.0, 1.0, 11, 11);
  ScalarField f(g, Quantity::W);
  for (std::size_t j = 0; j < 11; ++j)
    for (std::size_t i = 0; i < 11; ++i) f.at(i, j) = g.x(i) + 2.0 * g.theta(j);
  EXPECT_NEAR(f.interpolate(0.55, 0.35), 0.55 + 0.7, 1e-14);
  EXPECT_GT(f.invariant_violation(), 0.0);  // w must stay in [0, 1]
}

TEST(Config, DefaultsAreValid) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.grid.n_x(), 401u);
  EXPECT_EQ(c.region.theta_cap(), 0.2);
}

TEST(Config, CapAboveDomainRejected) {
  RunConfig c;
  c.grid = HalfPlaneGrid(-1.0, 3.0, 0.2, 41, 21);
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, FrontGuardCitesPrediction) {
  RunConfig c;
  c.t_final = 2.0;
  c.cadence = 0.5;
  try {
    validate(c);
    FAIL() << "guard did not trip";
  } catch (const ConfigError& e) {
    // (4/3) t^{3/2} at t = 2 for D̄ = θ
    const double front = 4.0 / 3.0 * std::pow(2.0, 1.5);
    EXPECT_NEAR(predicted_front(c, 2.0), front, 1e-12);
    EXPECT_NE(std::string(e.what()).find("grid.x_max"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("4/3"), std::string::npos);
  }
}
