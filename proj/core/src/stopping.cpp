#include "ttei/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttei {

void GlrConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (!(c_const > 0.0)) throw std::invalid_argument("C must be positive");
}

GlrState GlrState::empty(std::size_t k, double noise_variance) {
  GlrState s;
  s.counts.assign(k, 0);
  s.means.assign(k, 0.0);
  s.noise_variance = noise_variance;
  return s;
}

void GlrState::observe(ArmIndex arm, double y) {
  if (arm >= counts.size()) throw std::out_of_range("arm index out of range");
  ++counts[arm];
  means[arm] += (y - means[arm]) / static_cast<double>(counts[arm]);
  ++n;
}

void GlrState::validate() const {
  if (counts.size() != means.size() || counts.size() < 2) {
    throw std::invalid_argument("GLR state needs matching counts and means for at least two arms");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0 && means[i] != 0.0) {
      throw std::invalid_argument("an arm without samples must have empirical mean 0");
    }
  }
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
}

double glr_statistic(const GlrState& state, ArmIndex i, ArmIndex j) {
  const std::size_t k = state.num_arms();
  if (i >= k || j >= k) throw std::out_of_range("arm index out of range");
  if (i == j) throw std::invalid_argument("GLR statistic needs two distinct arms");
  const double ti = static_cast<double>(state.counts[i]);
  const double tj = static_cast<double>(state.counts[j]);
  if (ti == 0.0 && tj == 0.0) return 0.0;
  const double mi = state.means[i];
  const double mj = state.means[j];
  if (mi < mj) return -glr_statistic(state, j, i);
  if (state.noise_variance == 0.0) return mi > mj ? kInfinity : 0.0;

  const double pooled = (ti * mi + tj * mj) / (ti + tj);
  auto d = [&](double x, double y) { return (x - y) * (x - y) / (2.0 * state.noise_variance); };
  return ti * d(mi, pooled) + tj * d(mj, pooled);
}

ChernoffStatistic chernoff_Z(const GlrState& state) {
  const std::size_t k = state.num_arms();
  const auto top = std::max_element(state.means.begin(), state.means.end());
  const bool unique = std::count(state.means.begin(), state.means.end(), *top) == 1;

  auto inner_min = [&](ArmIndex i) {
    double m = kInfinity;
    for (ArmIndex j = 0; j < k; ++j) {
      if (j != i) m = std::min(m, glr_statistic(state, i, j));
    }
    return m;
  };

  if (unique) {
    const auto best = static_cast<ArmIndex>(top - state.means.begin());
    return {inner_min(best), best};
  }
  ChernoffStatistic out{-kInfinity, 0};
  for (ArmIndex i = 0; i < k; ++i) {
    const double v = inner_min(i);
    if (v > out.z) out = {v, i};
  }
  return out;
}

double threshold(std::size_t n, const GlrConfig& config) {
  if (n < 1) throw std::invalid_argument("threshold is defined for n >= 1");
  return std::log(config.c_const) + config.alpha * std::log(static_cast<double>(n)) - std::log(config.delta);
}

std::optional<ArmIndex> should_stop(const GlrState& state, const GlrConfig& config) {
  if (state.n < 1) return std::nullopt;
  const auto stat = chernoff_Z(state);
  if (stat.z > threshold(state.n, config)) return stat.candidate;
  return std::nullopt;
}

}  // namespace ttei
