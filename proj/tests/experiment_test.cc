#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ttei/experiment.hpp"

namespace ttei {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.instance = BanditInstance({1.0, 0.5, 0.0}, 1.0);
  c.policy.kind = PolicyKind::TTEI;
  c.stop = ConfidenceStop{0.9, 1};
  c.trials = 24;
  c.base_seed = 42;
  return c;
}

bool same_report(const AggregateReport& a, const AggregateReport& b) {
  return a.trials == b.trials && a.censored == b.censored && a.mean_samples == b.mean_samples &&
         a.stderr_samples == b.stderr_samples && a.error_rate == b.error_rate &&
         a.mean_proportions == b.mean_proportions;
}

TEST(ExperimentConfig, Validation) {
  auto c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.trials = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.horizon_cap = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.stop = ConfidenceStop{1.0, 1};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.policy.kind = PolicyKind::TO;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.policy.oracle_w = ProportionVector::uniform(2);
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Describe, StopRules) {
  EXPECT_EQ(describe(ConfidenceStop{0.95, 1}), "confidence(c=0.95)");
  EXPECT_EQ(describe(HorizonStop{300}), "horizon(n=300)");
  EXPECT_EQ(describe(ChernoffStop{}), "chernoff(delta=0.05;alpha=1.2;C=1)");
}

TEST(RunTrial, Deterministic) {
  auto c = small_config();
  c.record_trajectory = true;
  const auto a = run_trial(c, 5);
  const auto b = run_trial(c, 5);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.samples_used, b.samples_used);
  EXPECT_EQ(a.final_counts, b.final_counts);
  ASSERT_EQ(a.trajectory->size(), b.trajectory->size());
  for (std::size_t t = 0; t < a.trajectory->size(); ++t) {
    EXPECT_EQ((*a.trajectory)[t].chosen, (*b.trajectory)[t].chosen);
    EXPECT_EQ((*a.trajectory)[t].means, (*b.trajectory)[t].means);
  }
  EXPECT_NE(run_trial(c, 6).seed, a.seed);
}

TEST(RunTrial, InitialisesEveryArmOnceInOrder) {
  auto c = small_config();
  c.stop = HorizonStop{40};
  c.record_trajectory = true;
  const auto r = run_trial(c, 0);
  ASSERT_FALSE(r.trajectory->empty());
  const auto& first = r.trajectory->front();
  EXPECT_EQ(first.n, 4u);
  EXPECT_EQ(first.counts, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(r.samples_used, 40u);
  EXPECT_EQ(r.trajectory->size(), 37u);
  for (std::size_t t = 0; t < r.trajectory->size(); ++t) {
    const auto& rec = (*r.trajectory)[t];
    EXPECT_EQ(rec.n, 4 + t);
    EXPECT_EQ(std::accumulate(rec.counts.begin(), rec.counts.end(), std::size_t{0}), rec.n - 1);
  }
}

TEST(RunTrial, NoiselessInstanceStopsAfterInitialisation) {
  ExperimentConfig c;
  c.instance = BanditInstance({0.2, 0.9, 0.5}, 0.0);
  for (const StopRule& stop : {StopRule{ConfidenceStop{0.999, 1}}, StopRule{ChernoffStop{}}}) {
    c.stop = stop;
    for (std::size_t t = 0; t < 5; ++t) {
      const auto r = run_trial(c, t);
      EXPECT_EQ(r.samples_used, 3u);
      EXPECT_EQ(r.recommended, 1u);
      EXPECT_TRUE(r.correct);
      EXPECT_FALSE(r.censored);
    }
  }
}

TEST(RunTrial, CensorsAtHorizonCap) {
  ExperimentConfig c;
  c.instance = BanditInstance({1.0, 0.999}, 1.0);
  c.stop = ConfidenceStop{0.9999, 1};
  c.horizon_cap = 30;
  const auto r = run_trial(c, 0);
  EXPECT_TRUE(r.censored);
  EXPECT_EQ(r.samples_used, 30u);
  const std::vector<TrialResult> one{r};
  const auto rep = aggregate(one);
  EXPECT_EQ(rep.censored, 1u);
  EXPECT_EQ(rep.mean_samples, 0.0);
}

TEST(RunTrial, EveryPolicyRuns) {
  for (auto kind : {PolicyKind::EI, PolicyKind::TTEI, PolicyKind::aTTEI, PolicyKind::TTTS, PolicyKind::KG,
                    PolicyKind::RSO, PolicyKind::TO}) {
    auto c = small_config();
    c.policy.kind = kind;
    c.policy.oracle_w = ProportionVector({0.5, 0.3, 0.2});
    c.horizon_cap = 5000;
    const auto r = run_trial(c, 1);
    EXPECT_EQ(std::accumulate(r.final_counts.begin(), r.final_counts.end(), std::size_t{0}), r.samples_used)
        << to_string(kind);
  }
}

TEST(RunExperiment, SingleTrialMatchesTrial) {
  auto c = small_config();
  c.trials = 1;
  const auto r = run_trial(c, 0);
  const auto rep = run_experiment(c);
  EXPECT_EQ(rep.trials, 1u);
  EXPECT_EQ(rep.mean_samples, static_cast<double>(r.samples_used));
  EXPECT_EQ(rep.stderr_samples, 0.0);
  EXPECT_EQ(rep.error_rate, r.correct ? 0.0 : 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rep.mean_proportions[i], static_cast<double>(r.final_counts[i]) / static_cast<double>(r.samples_used));
  }
}

TEST(RunExperiment, IndependentOfOrderAndThreads) {
  auto c = small_config();
  const auto base = run_experiment(c, {1, {}});
  std::vector<std::size_t> order(c.trials);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::reverse(order.begin(), order.end());
  EXPECT_TRUE(same_report(base, run_experiment(c, {1, order})));
  std::rotate(order.begin(), order.begin() + 7, order.end());
  EXPECT_TRUE(same_report(base, run_experiment(c, {4, order})));
  EXPECT_TRUE(same_report(base, run_experiment(c, {3, {}})));
  EXPECT_THROW(run_experiment(c, {1, {0, 1, 2}}), std::invalid_argument);
}

TEST(RunExperiment, ProportionsOnSimplex) {
  auto c = small_config();
  c.trials = 30;
  const auto results = run_trials(c);
  for (const auto& r : results) {
    EXPECT_EQ(std::accumulate(r.final_counts.begin(), r.final_counts.end(), std::size_t{0}), r.samples_used);
  }
  const auto rep = aggregate(results);
  EXPECT_NEAR(std::accumulate(rep.mean_proportions.begin(), rep.mean_proportions.end(), 0.0), 1.0, 1e-9);
  EXPECT_GE(rep.error_rate, 0.0);
  EXPECT_LE(rep.error_rate, 1.0);
}

TEST(RunExperiment, ThinnedAlphaInTrajectory) {
  auto c = small_config();
  c.stop = HorizonStop{60};
  c.record_trajectory = true;
  c.alpha_stride = 5;
  const auto r = run_trial(c, 2);
  for (const auto& rec : *r.trajectory) {
    EXPECT_EQ(std::isnan(rec.alpha_best), rec.n % 5 != 0);
    if (rec.n % 5 == 0) {
      EXPECT_GE(rec.alpha_best, 0.0);
      EXPECT_LE(rec.log_one_minus_alpha_best, 0.0);
    }
  }
}

}  // namespace
}  // namespace ttei
