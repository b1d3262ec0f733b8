#include <gtest/gtest.h>

#include <sketchpress/random.hpp>

using namespace sketchpress;

TEST(Random, SameSeedSameDraws) {
  EXPECT_EQ(gaussian_matrix(5, 4, 7), gaussian_matrix(5, 4, 7));
  EXPECT_NE(gaussian_matrix(5, 4, 7), gaussian_matrix(5, 4, 8));
  EXPECT_NE(gaussian_matrix(5, 4, 7, 0), gaussian_matrix(5, 4, 7, 1));
}

TEST(Random, EntriesAddressedByCounter) {
  const CounterRng rng(3, 2);
  const Matrix g = gaussian_matrix(4, 6, 3, 2);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 6; ++j) EXPECT_EQ(g(i, j), rng.normal(static_cast<std::uint64_t>(i * 6 + j)));
}

TEST(Random, UniformInOpenInterval) {
  const CounterRng rng(0);
  for (std::uint64_t c = 0; c < 10000; ++c) {
    const double u = rng.uniform(c);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Random, NormalMoments) {
  const Matrix g = gaussian_matrix(200, 200, 99);
  const double mean = g.mean();
  const double var = (g.array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.03);
}
