#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "ttei/posterior.hpp"
#include "ttei/proportions.hpp"
#include "ttei/rng.hpp"

namespace ttei {

enum class PolicyKind { EI, TTEI, aTTEI, TTTS, KG, RSO, TO };

std::string_view to_string(PolicyKind kind) noexcept;
/// Accepts the canonical names case-insensitively. Throws std::invalid_argument.
PolicyKind parse_policy_kind(std::string_view name);

/// Outcome of one selection. For top-two rules `chosen` is either the
/// leader or the challenger, and the two differ.
struct SelectionRecord {
  ArmIndex chosen = 0;
  std::optional<ArmIndex> leader;
  std::optional<ArmIndex> challenger;
  std::optional<bool> used_top_slot;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::TTEI;
  double beta = 0.5;                       // TTEI, TTTS
  std::size_t refresh_period = 10;         // aTTEI
  std::size_t max_resamples = 100;         // TTTS
  std::optional<ProportionVector> oracle_w;  // RSO, TO

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// argmax_i v_{n,i}, ties to the lowest index. Candidates are compared on
/// log v so that underflowed values still order correctly.
SelectionRecord ei_select(const BeliefState& belief);

/// Top-two EI: leader = argmax v_{n,i}, challenger = argmax_i v_{n,i,leader};
/// one Bernoulli(beta) draw picks the leader. beta = 1 reproduces EI.
SelectionRecord ttei_select(const BeliefState& belief, double beta, Rng& rng);

struct AdaptiveBetaState {
  double beta = 0.5;
  std::size_t rounds = 0;
  std::size_t refresh_period = 10;
  double noise_variance = 1.0;
};

/// TTEI whose beta is replaced by the plug-in beta* (from posterior means)
/// before selections 11, 21, ... (for refresh_period 10). A failed plug-in
/// solve leaves beta unchanged.
std::pair<SelectionRecord, AdaptiveBetaState> attei_select(const BeliefState& belief,
                                                           AdaptiveBetaState state, Rng& rng);

/// Top-two Thompson sampling. The challenger is the argmax of a fresh
/// posterior draw that differs from the leader; after `max_resamples`
/// failures it falls back to argmax_{i != leader} v_{n,i,leader}.
SelectionRecord ttts_select(const BeliefState& belief, double beta, Rng& rng,
                            std::size_t max_resamples = 100);

/// Knowledge gradient for independent normal beliefs with known noise.
SelectionRecord kg_select(const BeliefState& belief, double noise_variance);

/// i.i.d. draw from w.
SelectionRecord rso_select(const ProportionVector& w, Rng& rng);

/// argmax_i w_i / (T_i / n); an unpulled arm with positive weight goes first.
SelectionRecord to_select(const ProportionVector& w, std::span<const std::size_t> counts);

/// Stateful wrapper used by the experiment runner: dispatches on the kind
/// and carries the adaptive-beta state.
class SamplingRule {
 public:
  SamplingRule(PolicyConfig config, double noise_variance);

  SelectionRecord select(const BeliefState& belief, Rng& rng);
  const PolicyConfig& config() const noexcept { return config_; }
  double current_beta() const noexcept;

 private:
  PolicyConfig config_;
  double noise_variance_;
  AdaptiveBetaState adaptive_;
};

}  // namespace ttei
