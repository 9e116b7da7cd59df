#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ttei/posterior.hpp"

namespace ttei {

/// Chernoff stopping threshold log(C n^alpha / delta).
///
/// The constant C that makes the error guarantee hold for every sampling
/// rule is not known in closed form; the default C = 1 is a heuristic.
struct GlrConfig {
  double delta = 0.05;
  double alpha = 1.2;
  double c_const = 1.0;

  void validate() const;
};

/// Empirical means and counts. An arm with no samples has mean 0.
struct GlrState {
  std::vector<std::size_t> counts;
  std::vector<double> means;
  double noise_variance = 1.0;
  std::size_t n = 0;  // total observations

  static GlrState empty(std::size_t k, double noise_variance);
  std::size_t num_arms() const noexcept { return counts.size(); }
  void observe(ArmIndex arm, double y);
  void validate() const;
};

/// Z_{n,i,j}: generalized likelihood ratio that mu_i exceeds mu_j.
/// Antisymmetric; 0 when both counts are zero. Throws on i == j.
double glr_statistic(const GlrState& state, ArmIndex i, ArmIndex j);

struct ChernoffStatistic {
  double z = 0.0;
  ArmIndex candidate = 0;
};

/// Z_n = max_i min_{j != i} Z_{n,i,j} and the maximizing arm. Uses the
/// empirical-best shortcut when the empirical best is unique.
ChernoffStatistic chernoff_Z(const GlrState& state);

double threshold(std::size_t n, const GlrConfig& config);

/// The recommended arm when Z_n exceeds the threshold at n, else nothing.
std::optional<ArmIndex> should_stop(const GlrState& state, const GlrConfig& config);

}  // namespace ttei
