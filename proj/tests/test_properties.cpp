#include <gtest/gtest.h>

#include "canetoads/properties.hpp"

using namespace canetoads;

class RandomCase : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomCase, StructuralProperties) {
  const properties::Report r = properties::run_case(GetParam());
  for (const auto& [name, v] : r.entries()) EXPECT_LE(v, 1e-12 + 1e-9) << name << " (" << r.profile << ")";
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCase, ::testing::Range<std::uint64_t>(1000, 1050));

TEST(RandomConfig, AlwaysValid) {
  for (std::uint64_t s = 0; s < 200; ++s) EXPECT_NO_THROW(validate(properties::random_config(s)));
}

TEST(RandomConfig, Deterministic) {
  EXPECT_TRUE(properties::random_config(42) == properties::random_config(42));
}
