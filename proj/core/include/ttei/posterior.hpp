#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ttei/rng.hpp"

namespace ttei {

using ArmIndex = std::size_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Ground truth of a Gaussian bandit: arm means and a common known noise
/// variance. A zero noise variance is accepted and yields noiseless draws.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> means, double noise_variance);

  const std::vector<double>& means() const noexcept { return means_; }
  double mean(ArmIndex arm) const { return means_.at(arm); }
  double noise_variance() const noexcept { return noise_variance_; }
  std::size_t num_arms() const noexcept { return means_.size(); }

  /// Lowest index among the arms with the largest mean.
  ArmIndex best_arm() const noexcept;
  /// True when every pairwise gap is nonzero.
  bool has_unique_means() const noexcept;
  double min_gap() const noexcept;
  double max_gap() const noexcept;

 private:
  std::vector<double> means_;
  double noise_variance_;
};

/// Gaussian posterior of one arm. The improper prior is encoded as mean 0
/// and infinite variance.
struct ArmPosterior {
  double mean = 0.0;
  double variance = kInfinity;
  std::size_t pulls = 0;

  bool improper() const noexcept { return variance == kInfinity; }
  double stddev() const noexcept;
};

/// Independent Gaussian posteriors over the arm means at period `step`
/// (1-based). Value type; updates never touch shared state.
class BeliefState {
 public:
  BeliefState() = default;
  BeliefState(std::vector<ArmPosterior> arms, std::size_t step);

  std::size_t num_arms() const noexcept { return arms_.size(); }
  const ArmPosterior& arm(ArmIndex i) const { return arms_.at(i); }
  const std::vector<ArmPosterior>& arms() const noexcept { return arms_; }
  std::size_t step() const noexcept { return step_; }
  std::vector<std::size_t> pull_counts() const;
  std::vector<double> posterior_means() const;
  bool all_proper() const noexcept;

  /// Conjugate update of `arm` with observation y. An improper arm has
  /// zero prior precision, so its posterior becomes N(y, noise_variance).
  /// With noise_variance == 0 the posterior collapses onto y.
  void observe(ArmIndex arm, double y, double noise_variance);

 private:
  std::vector<ArmPosterior> arms_;
  std::size_t step_ = 1;
};

/// k arms with the improper prior, or the supplied (mean, variance) pairs.
BeliefState new_belief(std::size_t k,
                       std::optional<std::span<const std::pair<double, double>>> prior = std::nullopt);

/// Returns a copy of `belief` after observing y on `arm`.
BeliefState update(const BeliefState& belief, ArmIndex arm, double y, double noise_variance);

/// I*_n: lowest-index argmax of the posterior mean over proper arms. Falls
/// back to arm 0 when every arm is improper.
ArmIndex posterior_leader(const BeliefState& belief);

// Expected-improvement measures. Improper arms evaluate to +infinity, which
// ranks them above every proper arm.

/// v_{n,i} = sigma_i f((mu_i - mu_{I*}) / sigma_i).
double ei_value(const BeliefState& belief, ArmIndex i);
double log_ei_value(const BeliefState& belief, ArmIndex i);

/// v_{n,i,j} = E[(theta_i - theta_j)^+] under independent posteriors.
/// Exactly 0 when i == j.
double pairwise_ei(const BeliefState& belief, ArmIndex i, ArmIndex j);
double log_pairwise_ei(const BeliefState& belief, ArmIndex i, ArmIndex j);

/// E[(theta_i - theta_j)^+] for a correlated Gaussian pair. Throws
/// std::invalid_argument when s_ii + s_jj - 2 s_ij is negative.
double pairwise_ei_correlated(double mu_i, double mu_j, double s_ii, double s_jj, double s_ij);

// Posterior probability of optimality, alpha_{n,i} = P(theta_i > max_{j != i} theta_j).
// All of these throw std::invalid_argument if any arm is improper.

double prob_best(const BeliefState& belief, ArmIndex i);
/// log alpha_{n,i}; finite far beyond where alpha itself underflows.
double log_prob_best(const BeliefState& belief, ArmIndex i);
std::vector<double> prob_best_all(const BeliefState& belief);
/// 1 - alpha_{n,i}, switching to sum_{j != i} alpha_{n,j} near saturation.
double prob_not_best(const BeliefState& belief, ArmIndex i);
/// log(1 - alpha_{n,i}) = logsumexp_{j != i} log alpha_{n,j}.
double log_prob_not_best(const BeliefState& belief, ArmIndex i);

/// Monte-Carlo estimate of (alpha_{n,1}, ..., alpha_{n,k}) from `draws`
/// joint posterior samples.
std::vector<double> prob_best_monte_carlo(const BeliefState& belief, std::size_t draws, Rng& rng);

/// One reward draw from N(mu_arm, sigma^2).
double simulate_observation(const BanditInstance& instance, ArmIndex arm, Rng& rng);

}  // namespace ttei
