#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ttei/proportions.hpp"

namespace ttei {
namespace {

std::vector<double> random_distinct_means(std::mt19937_64& rng, int k) {
  std::normal_distribution<double> z(0.0, 2.0);
  std::vector<double> m;
  while (static_cast<int>(m.size()) < k) {
    const double x = z(rng);
    if (std::none_of(m.begin(), m.end(), [&](double y) { return std::abs(x - y) < 1e-3; })) m.push_back(x);
  }
  return m;
}

// Equalized exponent terms (mu_i - mu_best)^2 / (1/w_i + 1/w_best).
std::vector<double> exponent_terms(const std::vector<double>& means, const ProportionVector& w) {
  const auto best = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
  std::vector<double> out;
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i != best) out.push_back(std::pow(means[i] - means[best], 2) / (1 / w[i] + 1 / w[best]));
  }
  return out;
}

TEST(ProportionVector, Validation) {
  EXPECT_NO_THROW(ProportionVector({0.5, 0.5}));
  EXPECT_THROW(ProportionVector({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(ProportionVector({1.5, -0.5}), std::invalid_argument);
  EXPECT_NEAR(ProportionVector::uniform(3)[2], 1.0 / 3.0, 1e-15);
}

TEST(SolveProportions, TwoArmsTakeResidualMass) {
  const std::vector<double> means{1.0, 0.0};
  const auto sol = solve_proportions(means, 1.0, 0.3);
  EXPECT_EQ(sol.w[0], 0.3);
  EXPECT_NEAR(sol.w[1], 0.7, 1e-12);
}

TEST(SolveProportions, RejectsBadInput) {
  const std::vector<double> dup{2.0, 1.0, 1.0};
  EXPECT_THROW(solve_proportions(dup, 1.0, 0.5), std::invalid_argument);
  const std::vector<double> ok{2.0, 1.0};
  EXPECT_THROW(solve_proportions(ok, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(solve_proportions(ok, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_proportions(ok, 0.0, 0.5), std::invalid_argument);
  const std::vector<double> one{1.0};
  EXPECT_THROW(solve_proportions(one, 1.0, 0.5), std::invalid_argument);
}

TEST(SolveProportions, BestArmSlotInCallerOrder) {
  const std::vector<double> means{1.0, 3.0, 2.0};
  const auto sol = solve_proportions(means, 1.0, 0.4);
  EXPECT_EQ(sol.w[1], 0.4);
  EXPECT_GT(sol.w[2], sol.w[0]);  // the nearer arm needs more samples
}

// Brute force over the slice w_best = 0.5 with grid step 1e-3 for the
// perturbed instance [5,4,1,1.01,0.99]: the three far arms end up with
// nearly equal shares.
TEST(SolveProportions, NearTiedArmsGetNearEqualShares) {
  const std::vector<double> means{5, 4, 1, 1.01, 0.99};
  const auto sol = solve_proportions(means, 1.0, 0.5);
  const double lo = std::min({sol.w[2], sol.w[3], sol.w[4]});
  const double hi = std::max({sol.w[2], sol.w[3], sol.w[4]});
  EXPECT_LT((hi - lo) / lo, 0.02);

  double best = 0.0;
  std::vector<double> best_w;
  std::vector<double> w(5, 0.5);
  const int steps = 500;
  for (int a = 1; a < steps; ++a) {
    for (int b = 1; a + b < steps; ++b) {
      for (int c = 1; a + b + c < steps; ++c) {
        const int d = steps - a - b - c;
        if (d < 1) continue;
        w[1] = a * 1e-3;
        w[2] = b * 1e-3;
        w[3] = c * 1e-3;
        w[4] = d * 1e-3;
        const double v = oracle::exponent_of(means, 1.0, w);
        if (v > best) {
          best = v;
          best_w = w;
        }
      }
    }
  }
  EXPECT_GE(sol.gamma_beta, best - 1e-12);
  EXPECT_NEAR(sol.gamma_beta, best, 5e-3 * best);
  const double glo = std::min({best_w[2], best_w[3], best_w[4]});
  const double ghi = std::max({best_w[2], best_w[3], best_w[4]});
  EXPECT_LT((ghi - glo) / glo, 0.2);  // grid resolution is 1e-3 on shares near 0.015
}

TEST(SolveProportionsProperties, EqualizesExponentTerms) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> arms(2, 8);
  std::uniform_real_distribution<double> betas(0.05, 0.95);
  for (int rep = 0; rep < 300; ++rep) {
    const auto means = random_distinct_means(rng, arms(rng));
    const double beta = betas(rng);
    const double sigma2 = 0.2 + rep * 0.01;
    const auto sol = solve_proportions(means, sigma2, beta);
    double total = 0.0;
    for (double w : sol.w.weights()) {
      EXPECT_GT(w, 0.0);
      total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
    const auto terms = exponent_terms(means, sol.w);
    for (double t : terms) EXPECT_NEAR(t / terms.front(), 1.0, 1e-9);
    EXPECT_NEAR(sol.gamma_beta / (terms.front() / (2 * sigma2)), 1.0, 1e-9);
    EXPECT_NEAR(complexity_of_allocation(means, sigma2, sol.w) / sol.gamma_beta, 1.0, 1e-9);
  }
}

TEST(SolveProportionsProperties, BeatsRandomAllocationsOnTheSlice) {
  std::mt19937_64 rng(91);
  std::exponential_distribution<double> e;
  for (int rep = 0; rep < 20; ++rep) {
    const auto means = random_distinct_means(rng, 5);
    const double beta = 0.3 + 0.02 * rep;
    const auto sol = solve_proportions(means, 1.0, beta);
    const auto best = static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> w(5);
      double s = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        if (i != best) s += (w[i] = e(rng));
      }
      for (std::size_t i = 0; i < 5; ++i) w[i] = (i == best) ? beta : w[i] * (1 - beta) / s;
      EXPECT_GE(sol.gamma_beta, complexity_of_allocation(means, 1.0, ProportionVector(w)) - 1e-12);
    }
  }
}

TEST(SolveProportionsProperties, ScaleEquivariance) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const auto means = random_distinct_means(rng, 6);
    const double c = 0.1 + 0.1 * rep;
    std::vector<double> scaled(means);
    for (double& m : scaled) m *= c;
    const auto a = solve_proportions(means, 1.5, 0.4);
    const auto b = solve_proportions(scaled, 1.5 * c * c, 0.4);
    for (std::size_t i = 0; i < means.size(); ++i) EXPECT_NEAR(a.w[i], b.w[i], 1e-9);
    EXPECT_NEAR(a.gamma_beta / b.gamma_beta, 1.0, 1e-9);
  }
}

TEST(ComplexityOfAllocation, Values) {
  const std::vector<double> means{1.0, 0.0};
  EXPECT_DOUBLE_EQ(complexity_of_allocation(means, 1.0, ProportionVector({0.5, 0.5})), 0.125);
  const std::vector<double> three{1.0, 0.0, -1.0};
  EXPECT_EQ(complexity_of_allocation(three, 1.0, ProportionVector({0.5, 0.5, 0.0})), 0.0);
  EXPECT_THROW(complexity_of_allocation(three, 1.0, ProportionVector({0.0, 0.5, 0.5})), std::invalid_argument);
}

// k = 2: Gamma_beta = Delta^2 / (2 sigma^2 (1/(1-beta) + 1/beta)), maximized at 1/2.
TEST(SolveOptimalBeta, TwoArmsBruteForce) {
  const std::vector<double> means{1.0, 0.0};
  double arg = 0.0;
  double top = 0.0;
  for (int i = 1; i < 10000; ++i) {
    const double b = i * 1e-4;
    const double v = 1.0 / (2.0 * (1.0 / (1.0 - b) + 1.0 / b));
    if (v > top) {
      top = v;
      arg = b;
    }
  }
  const auto s = solve_optimal_beta(means, 1.0);
  EXPECT_NEAR(s.beta_star, arg, 1e-3);
  EXPECT_NEAR(s.beta_star, 0.5, 1e-3);
  EXPECT_NEAR(s.gamma_star, 0.125, 1e-9);
}

TEST(SolveOptimalBeta, StandardInstances) {
  EXPECT_NEAR(solve_optimal_beta(std::vector<double>{5, 4, 3, 2, 1}, 1.0).beta_star, 0.45, 0.01);
  EXPECT_NEAR(solve_optimal_beta(std::vector<double>{2, 0.8, 0.6, 0.4, 0.2}, 1.0).beta_star, 0.35, 0.01);
  const std::vector<double> tied{5, 4, 1, 1, 1};
  EXPECT_THROW(solve_optimal_beta(tied, 1.0), std::invalid_argument);
  EXPECT_NEAR(solve_optimal_beta(perturb_duplicates(tied), 1.0).beta_star, 0.48, 0.01);
}

TEST(SolveOptimalBeta, MatchesGridScan) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const auto means = random_distinct_means(rng, 4);
    const auto s = solve_optimal_beta(means, 1.0);
    for (int i = 1; i < 1000; ++i) {
      EXPECT_GE(s.gamma_star, solve_proportions(means, 1.0, i * 1e-3).gamma_beta - 1e-12);
    }
  }
}

TEST(SolveOptimalBetaProperties, RobustnessBound) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> arms(2, 7);
  for (int rep = 0; rep < 40; ++rep) {
    const auto means = random_distinct_means(rng, arms(rng));
    const auto s = solve_optimal_beta(means, 1.0);
    EXPECT_LE(s.gamma_beta, s.gamma_star + 1e-15);
    EXPECT_GE(s.gamma_beta, s.gamma_star / 2 - 1e-15);
    for (int i = 1; i <= 19; ++i) {
      const double beta = 0.05 * i;
      const double g = solve_proportions(means, 1.0, beta).gamma_beta;
      const double bound = s.gamma_star / std::max(s.beta_star / beta, (1 - s.beta_star) / (1 - beta));
      EXPECT_GE(g, bound * (1 - 1e-9)) << beta;
    }
  }
}

TEST(PerturbDuplicates, SeparatesTies) {
  const std::vector<double> tied{5, 4, 1, 1, 1};
  const auto p = perturb_duplicates(tied);
  EXPECT_EQ(p[0], 5.0);
  EXPECT_EQ(p[2], 1.0);
  EXPECT_EQ(p[3], 1.0 + 1e-9);
  EXPECT_EQ(p[4], 1.0 + 2e-9);
  const std::vector<double> distinct{3, 2, 1};
  EXPECT_EQ(perturb_duplicates(distinct), distinct);
}

}  // namespace
}  // namespace ttei
