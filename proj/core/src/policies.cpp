#include "ttei/policies.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ttei/gaussian.hpp"

namespace ttei {
namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 7> kNames{{
    {PolicyKind::EI, "EI"},
    {PolicyKind::TTEI, "TTEI"},
    {PolicyKind::aTTEI, "aTTEI"},
    {PolicyKind::TTTS, "TTTS"},
    {PolicyKind::KG, "KG"},
    {PolicyKind::RSO, "RSO"},
    {PolicyKind::TO, "TO"},
}};

// Lowest-index argmax of score(i) over i in [0, k), skipping `excluded`.
template <class Score>
ArmIndex argmax(std::size_t k, Score&& score, std::optional<ArmIndex> excluded = std::nullopt) {
  std::optional<ArmIndex> best;
  double best_score = -kInfinity;
  for (ArmIndex i = 0; i < k; ++i) {
    if (excluded && *excluded == i) continue;
    const double s = score(i);
    if (!best || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return *best;
}

ArmIndex ei_challenger(const BeliefState& belief, ArmIndex leader) {
  return argmax(
      belief.num_arms(), [&](ArmIndex i) { return log_pairwise_ei(belief, i, leader); }, leader);
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
}

}  // namespace

std::string_view to_string(PolicyKind kind) noexcept {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
  };
  for (const auto& [k, n] : kNames) {
    if (lower(n) == lower(name)) return k;
  }
  throw std::invalid_argument("unknown policy kind '" + std::string(name) + "'");
}

void PolicyConfig::validate() const {
  switch (kind) {
    case PolicyKind::TTEI:
    case PolicyKind::TTTS:
      check_beta(beta);
      break;
    case PolicyKind::aTTEI:
      if (refresh_period == 0) throw std::invalid_argument("refresh_period must be positive");
      break;
    case PolicyKind::RSO:
    case PolicyKind::TO:
      if (!oracle_w) throw std::invalid_argument("oracle policies need oracle_w");
      break;
    default:
      break;
  }
}

SelectionRecord ei_select(const BeliefState& belief) {
  const ArmIndex best = argmax(belief.num_arms(), [&](ArmIndex i) { return log_ei_value(belief, i); });
  return {best, best, std::nullopt, std::nullopt};
}

SelectionRecord ttei_select(const BeliefState& belief, double beta, Rng& rng) {
  check_beta(beta);
  const ArmIndex leader = ei_select(belief).chosen;
  const ArmIndex challenger = ei_challenger(belief, leader);
  const bool top = std::bernoulli_distribution(beta)(rng);
  return {top ? leader : challenger, leader, challenger, top};
}

std::pair<SelectionRecord, AdaptiveBetaState> attei_select(const BeliefState& belief,
                                                           AdaptiveBetaState state, Rng& rng) {
  ++state.rounds;
  if (state.rounds > 1 && (state.rounds - 1) % state.refresh_period == 0 && belief.all_proper()) {
    const auto means = belief.posterior_means();
    const bool degenerate = std::all_of(means.begin(), means.end(), [&](double m) { return m == means.front(); });
    if (!degenerate) {
      try {
        const auto plug_in = perturb_duplicates(means);
        const double nv = state.noise_variance > 0.0 ? state.noise_variance : 1.0;
        state.beta = solve_optimal_beta(plug_in, nv).beta_star;
      } catch (const std::invalid_argument&) {
        // keep the previous beta
      }
    }
  }
  return {ttei_select(belief, state.beta, rng), state};
}

SelectionRecord ttts_select(const BeliefState& belief, double beta, Rng& rng, std::size_t max_resamples) {
  check_beta(beta);
  if (!belief.all_proper()) throw std::invalid_argument("TTTS needs every arm to have a proper posterior");
  const std::size_t k = belief.num_arms();
  std::normal_distribution<double> z;
  auto thompson = [&] {
    return argmax(k, [&](ArmIndex i) {
      const auto& a = belief.arm(i);
      return a.mean + a.stddev() * z(rng);
    });
  };

  const ArmIndex leader = thompson();
  if (std::bernoulli_distribution(beta)(rng)) {
    return {leader, leader, std::nullopt, true};
  }
  for (std::size_t r = 0; r < max_resamples; ++r) {
    const ArmIndex candidate = thompson();
    if (candidate != leader) return {candidate, leader, candidate, false};
  }
  const ArmIndex fallback = ei_challenger(belief, leader);
  return {fallback, leader, fallback, false};
}

SelectionRecord kg_select(const BeliefState& belief, double noise_variance) {
  const std::size_t k = belief.num_arms();
  const ArmIndex chosen = argmax(k, [&](ArmIndex i) {
    const auto& a = belief.arm(i);
    if (a.improper()) return kInfinity;
    double rival = -kInfinity;
    for (ArmIndex j = 0; j < k; ++j) {
      if (j != i) rival = std::max(rival, belief.arm(j).mean);
    }
    const double spread = a.variance / std::sqrt(a.variance + noise_variance);
    if (!(spread > 0.0)) return -kInfinity;
    return std::log(spread) + log_f_ei(-std::abs(a.mean - rival) / spread);
  });
  return {chosen, std::nullopt, std::nullopt, std::nullopt};
}

SelectionRecord rso_select(const ProportionVector& w, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(w.weights().begin(), w.weights().end());
  return {pick(rng), std::nullopt, std::nullopt, std::nullopt};
}

SelectionRecord to_select(const ProportionVector& w, std::span<const std::size_t> counts) {
  if (counts.size() != w.size()) throw std::invalid_argument("counts and weights differ in length");
  for (ArmIndex i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0 && w[i] > 0.0) return {i, std::nullopt, std::nullopt, std::nullopt};
  }
  std::size_t n = 1;
  for (std::size_t c : counts) n += c;
  const ArmIndex chosen = argmax(counts.size(), [&](ArmIndex i) {
    const double empirical = static_cast<double>(std::max<std::size_t>(counts[i], 1)) / static_cast<double>(n);
    return w[i] / empirical;
  });
  return {chosen, std::nullopt, std::nullopt, std::nullopt};
}

SamplingRule::SamplingRule(PolicyConfig config, double noise_variance)
    : config_(std::move(config)), noise_variance_(noise_variance) {
  config_.validate();
  adaptive_.beta = 0.5;
  adaptive_.refresh_period = config_.refresh_period;
  adaptive_.noise_variance = noise_variance;
}

double SamplingRule::current_beta() const noexcept {
  switch (config_.kind) {
    case PolicyKind::aTTEI:
      return adaptive_.beta;
    case PolicyKind::EI:
      return 1.0;
    default:
      return config_.beta;
  }
}

SelectionRecord SamplingRule::select(const BeliefState& belief, Rng& rng) {
  switch (config_.kind) {
    case PolicyKind::EI:
      return ei_select(belief);
    case PolicyKind::TTEI:
      return ttei_select(belief, config_.beta, rng);
    case PolicyKind::aTTEI: {
      auto [record, next] = attei_select(belief, adaptive_, rng);
      adaptive_ = next;
      return record;
    }
    case PolicyKind::TTTS:
      return ttts_select(belief, config_.beta, rng, config_.max_resamples);
    case PolicyKind::KG:
      return kg_select(belief, noise_variance_);
    case PolicyKind::RSO:
      return rso_select(*config_.oracle_w, rng);
    case PolicyKind::TO: {
      const auto counts = belief.pull_counts();
      return to_select(*config_.oracle_w, counts);
    }
  }
  throw std::logic_error("unhandled policy kind");
}

}  // namespace ttei
