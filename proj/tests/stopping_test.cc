#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ttei/stopping.hpp"

namespace ttei {
namespace {

GlrState random_state(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<std::size_t> count(0, 30);
  std::normal_distribution<double> mean(0.0, 1.0);
  auto s = GlrState::empty(k, 0.5 + std::uniform_real_distribution<double>(0, 2)(rng));
  for (std::size_t i = 0; i < k; ++i) {
    s.counts[i] = count(rng);
    s.means[i] = s.counts[i] ? mean(rng) : 0.0;
    s.n += s.counts[i];
  }
  return s;
}

TEST(GlrConfig, Validation) {
  EXPECT_NO_THROW(GlrConfig{}.validate());
  EXPECT_THROW((GlrConfig{0.0, 1.2, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((GlrConfig{0.1, 1.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((GlrConfig{0.1, 1.2, 0.0}.validate()), std::invalid_argument);
}

TEST(GlrState, ObserveKeepsRunningMeans) {
  auto s = GlrState::empty(2, 1.0);
  s.observe(0, 1.0);
  s.observe(0, 3.0);
  s.observe(1, -1.0);
  EXPECT_EQ(s.counts[0], 2u);
  EXPECT_DOUBLE_EQ(s.means[0], 2.0);
  EXPECT_DOUBLE_EQ(s.means[1], -1.0);
  EXPECT_EQ(s.n, 3u);
}

TEST(GlrStatistic, Examples) {
  auto s = GlrState::empty(2, 1.0);
  s.counts = {1, 1};
  s.means = {1.0, 0.0};
  s.n = 2;
  EXPECT_DOUBLE_EQ(glr_statistic(s, 0, 1), 0.25);
  EXPECT_DOUBLE_EQ(glr_statistic(s, 1, 0), -0.25);
  s.means = {0.7, 0.7};
  EXPECT_EQ(glr_statistic(s, 0, 1), 0.0);
  EXPECT_THROW(glr_statistic(s, 1, 1), std::invalid_argument);
  EXPECT_EQ(glr_statistic(GlrState::empty(3, 1.0), 0, 2), 0.0);
}

TEST(GlrStatistic, ZeroNoiseIsInfinite) {
  auto s = GlrState::empty(2, 0.0);
  s.counts = {1, 1};
  s.means = {1.0, 0.0};
  s.n = 2;
  EXPECT_EQ(glr_statistic(s, 0, 1), kInfinity);
  EXPECT_EQ(glr_statistic(s, 1, 0), -kInfinity);
}

TEST(GlrStatisticProperties, AntisymmetryAndDirectDisplay) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto s = random_state(rng, 5);
    for (ArmIndex i = 0; i < 5; ++i) {
      for (ArmIndex j = 0; j < 5; ++j) {
        if (i == j) continue;
        EXPECT_EQ(glr_statistic(s, i, j), -glr_statistic(s, j, i));
        EXPECT_NEAR(glr_statistic(s, i, j), oracle::glr_direct(s, i, j), 1e-12);
      }
    }
  }
}

TEST(GlrStatisticProperties, ScaleInvariance) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = random_state(rng, 4);
    const double c = 0.2 + 0.05 * rep;
    auto t = s;
    for (double& m : t.means) m *= c;
    t.noise_variance *= c * c;
    for (ArmIndex i = 0; i < 4; ++i) {
      for (ArmIndex j = 0; j < 4; ++j) {
        if (i != j) EXPECT_NEAR(glr_statistic(s, i, j), glr_statistic(t, i, j), 1e-9 * (1 + std::abs(glr_statistic(s, i, j))));
      }
    }
  }
}

TEST(ChernoffZ, Examples) {
  auto s = GlrState::empty(3, 1.0);
  s.counts = {2, 2, 2};
  s.means = {0.4, 0.4, 0.4};
  s.n = 6;
  EXPECT_EQ(chernoff_Z(s).z, 0.0);

  auto two = GlrState::empty(2, 1.0);
  two.counts = {3, 5};
  two.means = {-0.2, 0.9};
  two.n = 8;
  const auto z = chernoff_Z(two);
  EXPECT_EQ(z.candidate, 1u);
  EXPECT_DOUBLE_EQ(z.z, glr_statistic(two, 1, 0));
}

TEST(ChernoffZProperties, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 3000; ++rep) {
    auto s = random_state(rng, 5);
    if (rep % 5 == 0) s.means[1] = s.means[3];  // force some ties
    const auto z = chernoff_Z(s);
    EXPECT_NEAR(z.z, oracle::max_min_glr(s), 1e-12);
  }
}

TEST(ChernoffZProperties, SignStructure) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto s = random_state(rng, 5);
    for (ArmIndex i = 0; i < 5; ++i) {
      double inner = kInfinity;
      bool is_best = true;
      for (ArmIndex j = 0; j < 5; ++j) {
        if (j == i) continue;
        inner = std::min(inner, glr_statistic(s, i, j));
        if (s.means[j] > s.means[i]) is_best = false;
      }
      // zero-count pairs give 0 regardless of order, so only one direction is strict
      if (is_best) EXPECT_GE(inner, 0.0);
      if (inner < 0.0) EXPECT_FALSE(is_best);
    }
  }
}

TEST(Threshold, Examples) {
  EXPECT_EQ(threshold(1, {1.0, 1.0, 1.0}), 0.0);
  EXPECT_NEAR(threshold(10, {0.1, 2.0, 2.0}), 7.6009024595, 1e-9);
  EXPECT_NEAR(threshold(50, {0.05, 1.2, 1.0}) - threshold(50, {0.1, 1.2, 1.0}), std::log(2.0), 1e-12);
  double prev = -kInfinity;
  for (std::size_t n = 1; n < 2000; ++n) {
    const double t = threshold(n, {});
    EXPECT_GT(t, prev);
    prev = t;
  }
  EXPECT_THROW(threshold(0, {}), std::invalid_argument);
}

TEST(ShouldStop, Examples) {
  auto s = GlrState::empty(3, 1.0);
  s.observe(0, 5.0);
  EXPECT_FALSE(should_stop(s, {}));

  auto two = GlrState::empty(2, 1.0);
  two.counts = {10, 10};
  two.means = {3.0, 1.0};  // each side contributes 10 * 1 / 2
  two.n = 20;
  ASSERT_NEAR(chernoff_Z(two).z, 10.0, 1e-12);
  const GlrConfig cfg{};
  ASSERT_LT(threshold(20, cfg), 10.0);
  EXPECT_EQ(should_stop(two, cfg), 0u);
  const GlrConfig strict{1e-6, 1.2, 1.0};
  ASSERT_GT(threshold(20, strict), 10.0);
  EXPECT_FALSE(should_stop(two, strict));
}

}  // namespace
}  // namespace ttei
