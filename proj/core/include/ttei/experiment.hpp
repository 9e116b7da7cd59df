#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ttei/policies.hpp"
#include "ttei/posterior.hpp"
#include "ttei/stopping.hpp"

namespace ttei {

/// Stop once max_i alpha_{n,i} >= c, checking every `check_every` periods.
struct ConfidenceStop {
  double c = 0.95;
  std::size_t check_every = 1;
};

struct ChernoffStop {
  GlrConfig glr;
};

/// Run exactly n_max measurements.
struct HorizonStop {
  std::size_t n_max = 10'000;
};

using StopRule = std::variant<ConfidenceStop, ChernoffStop, HorizonStop>;

std::string describe(const StopRule& stop);

struct ExperimentConfig {
  BanditInstance instance{{1.0, 0.0}, 1.0};
  std::string instance_id;
  PolicyConfig policy;
  StopRule stop = ConfidenceStop{};
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::size_t horizon_cap = 1'000'000;
  bool record_trajectory = false;
  /// Posterior probabilities in a trajectory are evaluated on every
  /// `alpha_stride`-th period only (they cost k quadratures each); other
  /// records carry NaN there.
  std::size_t alpha_stride = 1;

  void validate() const;
};

/// State at period n, before the measurement I_n = `chosen` is taken.
struct TrajectoryRecord {
  std::size_t n = 0;
  ArmIndex chosen = 0;
  double alpha_best = 0.0;                // alpha_{n,best} for the true best arm
  double log_one_minus_alpha_best = 0.0;  // log(1 - alpha_{n,best})
  double z = 0.0;                         // Chernoff statistic Z_n
  std::vector<std::size_t> counts;        // T_{n,i}
  std::vector<double> means;              // mu_{n,i}
};

using Trajectory = std::vector<TrajectoryRecord>;

struct TrialResult {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  std::size_t samples_used = 0;
  ArmIndex recommended = 0;
  bool correct = false;
  bool censored = false;
  std::vector<std::size_t> final_counts;
  std::optional<Trajectory> trajectory;
};

struct AggregateReport {
  std::size_t trials = 0;
  std::size_t censored = 0;
  /// Mean and standard error of samples_used over uncensored trials.
  double mean_samples = 0.0;
  double stderr_samples = 0.0;
  /// Misidentification rate over uncensored trials.
  double error_rate = 0.0;
  /// Average of final_counts / samples_used over all trials.
  std::vector<double> mean_proportions;
};

struct RunOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  /// Optional execution order (a permutation of trial indices). Results do
  /// not depend on it.
  std::vector<std::size_t> order;
};

/// One seeded trial: measure every arm once (giving each arm the prior
/// N(Y_i, sigma^2)), then select, observe and update until the stop rule
/// fires or horizon_cap measurements have been made (censored).
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index);

/// All trials of `config`, indexed by trial.
std::vector<TrialResult> run_trials(const ExperimentConfig& config, const RunOptions& options = {});

AggregateReport aggregate(std::span<const TrialResult> results);

AggregateReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace ttei
