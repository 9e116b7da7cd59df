#include "ttei/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ttei {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Arm with max_i alpha_{n,i} >= c, if any. For c > 1/2 only the arm with the
// largest posterior mean can qualify, since P(theta_j > theta_i) > 1/2 forces
// mu_j > mu_i.
std::optional<ArmIndex> confident_arm(const BeliefState& belief, double c) {
  if (c > 0.5) {
    const ArmIndex leader = posterior_leader(belief);
    if (prob_best(belief, leader) >= c) return leader;
    return std::nullopt;
  }
  const auto alphas = prob_best_all(belief);
  const auto it = std::max_element(alphas.begin(), alphas.end());
  if (*it >= c) return static_cast<ArmIndex>(it - alphas.begin());
  return std::nullopt;
}

TrajectoryRecord snapshot(const BeliefState& belief, const GlrState& glr, ArmIndex chosen,
                          ArmIndex true_best, bool with_alpha) {
  TrajectoryRecord r;
  r.n = belief.step();
  r.chosen = chosen;
  r.counts = belief.pull_counts();
  r.means = belief.posterior_means();
  r.z = chernoff_Z(glr).z;
  if (with_alpha) {
    r.alpha_best = prob_best(belief, true_best);
    r.log_one_minus_alpha_best = log_prob_not_best(belief, true_best);
  } else {
    r.alpha_best = kNaN;
    r.log_one_minus_alpha_best = kNaN;
  }
  return r;
}

}  // namespace

std::string describe(const StopRule& stop) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const ConfidenceStop& s) { out << "confidence(c=" << s.c << ")"; },
                 [&](const ChernoffStop& s) {
                   out << "chernoff(delta=" << s.glr.delta << ";alpha=" << s.glr.alpha << ";C=" << s.glr.c_const
                       << ")";
                 },
                 [&](const HorizonStop& s) { out << "horizon(n=" << s.n_max << ")"; },
             },
             stop);
  return out.str();
}

void ExperimentConfig::validate() const {
  policy.validate();
  if (policy.oracle_w && policy.oracle_w->size() != instance.num_arms()) {
    throw std::invalid_argument("oracle_w must have one weight per arm");
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (horizon_cap < instance.num_arms()) throw std::invalid_argument("horizon_cap must be at least k");
  if (alpha_stride < 1) throw std::invalid_argument("alpha_stride must be positive");
  std::visit(Overloaded{
                 [](const ConfidenceStop& s) {
                   if (!(s.c > 0.0 && s.c < 1.0)) throw std::invalid_argument("confidence c must lie in (0, 1)");
                   if (s.check_every < 1) throw std::invalid_argument("check_every must be positive");
                 },
                 [](const ChernoffStop& s) { s.glr.validate(); },
                 [&](const HorizonStop& s) {
                   if (s.n_max < instance.num_arms()) throw std::invalid_argument("horizon must be at least k");
                 },
             },
             stop);
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial_index) {
  const BanditInstance& inst = config.instance;
  const std::size_t k = inst.num_arms();
  const double noise = inst.noise_variance();
  const ArmIndex true_best = inst.best_arm();

  TrialResult result;
  result.trial_index = trial_index;
  result.seed = derive_seed(config.base_seed, trial_index);
  Rng rng(result.seed);

  BeliefState belief = new_belief(k);
  GlrState glr = GlrState::empty(k, noise);
  SamplingRule rule(config.policy, noise);
  if (config.record_trajectory) result.trajectory.emplace();

  auto measure = [&](ArmIndex arm) {
    const double y = simulate_observation(inst, arm, rng);
    belief.observe(arm, y, noise);
    glr.observe(arm, y);
  };

  for (ArmIndex arm = 0; arm < k; ++arm) measure(arm);

  std::optional<ArmIndex> verdict;
  std::size_t since_check = 0;
  for (;;) {
    const std::size_t samples = belief.step() - 1;
    verdict = std::visit(Overloaded{
                             [&](const ConfidenceStop& s) -> std::optional<ArmIndex> {
                               if (since_check++ % s.check_every != 0) return std::nullopt;
                               return confident_arm(belief, s.c);
                             },
                             [&](const ChernoffStop& s) { return should_stop(glr, s.glr); },
                             [&](const HorizonStop& s) -> std::optional<ArmIndex> {
                               if (samples >= s.n_max) return posterior_leader(belief);
                               return std::nullopt;
                             },
                         },
                         config.stop);
    if (verdict || samples >= config.horizon_cap) break;

    const SelectionRecord sel = rule.select(belief, rng);
    if (result.trajectory) {
      const bool with_alpha = belief.step() % config.alpha_stride == 0;
      result.trajectory->push_back(snapshot(belief, glr, sel.chosen, true_best, with_alpha));
    }
    measure(sel.chosen);
  }

  result.samples_used = belief.step() - 1;
  result.final_counts = belief.pull_counts();
  result.censored = !verdict.has_value();
  result.recommended = verdict ? *verdict : posterior_leader(belief);
  result.correct = result.recommended == true_best;
  return result;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  std::vector<std::size_t> order = options.order;
  if (order.empty()) {
    order.resize(config.trials);
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i || sorted.size() != config.trials) {
        throw std::invalid_argument("execution order must be a permutation of the trial indices");
      }
    }
  }

  std::vector<TrialResult> results(config.trials);
  std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= order.size()) return;
      try {
        results[order[slot]] = run_trial(config, order[slot]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(order.size());
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

AggregateReport aggregate(std::span<const TrialResult> results) {
  AggregateReport report;
  report.trials = results.size();
  if (results.empty()) return report;

  const std::size_t k = results.front().final_counts.size();
  report.mean_proportions.assign(k, 0.0);
  double sum = 0.0;
  std::size_t completed = 0;
  std::size_t wrong = 0;
  // Accumulate in trial order so the report is independent of scheduling.
  for (const auto& r : results) {
    for (std::size_t i = 0; i < k; ++i) {
      report.mean_proportions[i] += static_cast<double>(r.final_counts[i]) / static_cast<double>(r.samples_used);
    }
    if (r.censored) {
      ++report.censored;
      continue;
    }
    ++completed;
    sum += static_cast<double>(r.samples_used);
    if (!r.correct) ++wrong;
  }
  for (double& p : report.mean_proportions) p /= static_cast<double>(results.size());
  if (completed > 0) {
    const double m = static_cast<double>(completed);
    report.mean_samples = sum / m;
    report.error_rate = static_cast<double>(wrong) / m;
    if (completed > 1) {
      double ss = 0.0;
      for (const auto& r : results) {
        if (r.censored) continue;
        const double d = static_cast<double>(r.samples_used) - report.mean_samples;
        ss += d * d;
      }
      report.stderr_samples = std::sqrt(ss / (m - 1.0) / m);
    }
  }
  return report;
}

AggregateReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  const auto results = run_trials(config, options);
  return aggregate(results);
}

}  // namespace ttei
