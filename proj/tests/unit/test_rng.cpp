#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "imhdc/rng.hpp"

namespace rng = imhdc::rng;

TEST(Rng, SplitMixReferenceValues) {
  // First outputs of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(rng::mix64(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng::mix64(2 * 0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, FnvReferenceValues) {
  EXPECT_EQ(rng::tag(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(rng::tag("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Rng, StreamsAreReproducibleAndKeyed) {
  rng::Stream a(rng::derive(1, "x"));
  rng::Stream b(rng::derive(1, "x"));
  rng::Stream c(rng::derive(1, "y"));
  int differ = 0;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    differ += va != c.next() ? 1 : 0;
  }
  EXPECT_EQ(differ, 100);
  EXPECT_NE(rng::derive(1, "x", 0), rng::derive(1, "x", 1));
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  rng::Stream s(7);
  std::vector<int> hist(10, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto v = s.below(10);
    ASSERT_LT(v, 10U);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, NormalMoments) {
  rng::Stream s(3);
  double sum = 0;
  double sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  double keyed = 0;
  for (int i = 0; i < n; ++i) keyed += rng::normal_from(rng::derive(4, "n", i));
  EXPECT_NEAR(keyed / n, 0.0, 0.01);
}

TEST(Rng, UnitIntervalBounds) {
  EXPECT_EQ(rng::to_unit(0), 0.0);
  EXPECT_LT(rng::to_unit(~0ULL), 1.0);
}
