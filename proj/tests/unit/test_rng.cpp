#include <gtest/gtest.h>

#include <set>

#include "minorbit/rng.hpp"

namespace rng = minorbit::rng;

TEST(Rng, DrawIsPureFunctionOfKeyAndIndex) {
  const auto key = rng::stream_key(7, 3, "x");
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(rng::draw(key, i), rng::draw(key, i));
  EXPECT_NE(rng::draw(key, 0), rng::draw(key, 1));
}

TEST(Rng, StreamKeysSeparateSeedReplicaAndLabel) {
  std::set<std::uint64_t> keys;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    for (std::uint64_t r = 0; r < 8; ++r) {
      for (const char* label : {"env", "x", "y"}) keys.insert(rng::stream_key(seed, r, label));
    }
  }
  EXPECT_EQ(keys.size(), 8u * 8u * 3u);
}

TEST(Rng, UniformInUnitInterval) {
  const auto key = rng::stream_key(1, 0, "u");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform(key, i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(Rng, UniformBelowCoversRangeEvenly) {
  const auto key = rng::stream_key(2, 0, "b");
  std::vector<int> counts(5, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto v = rng::uniform_below(key, i, 5);
    ASSERT_LT(v, 5u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 5, 600);
}

TEST(Rng, ToUnitExtremes) {
  EXPECT_EQ(rng::to_unit(0), 0.0);
  EXPECT_LT(rng::to_unit(~0ULL), 1.0);
}
