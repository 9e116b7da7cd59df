#include "ttei/posterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ttei/gaussian.hpp"

namespace ttei {
namespace {

void check_arm(std::size_t k, ArmIndex arm) {
  if (arm >= k) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range for " +
                            std::to_string(k) + " arms");
  }
}

void require_proper(const BeliefState& belief) {
  if (!belief.all_proper()) {
    throw std::invalid_argument("probability of optimality is undefined while an arm has the improper prior");
  }
}

double log_sum_exp(std::span<const double> xs) {
  double hi = -kInfinity;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == -kInfinity) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// 16-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration
// on P_16.
struct GaussLegendre16 {
  static constexpr int kOrder = 16;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre16() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int n = 2; n <= kOrder; ++n) {
          const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

const GaussLegendre16& gauss_legendre() {
  static const GaussLegendre16 rule;
  return rule;
}

// log of phi_i(x) * prod_{j != i} Phi_j(x), which is concave in x. Arms with
// zero posterior variance contribute a step function, folded into `lower`.
struct LogIntegrand {
  double mean;
  double sd;
  std::vector<std::pair<double, double>> rivals;  // proper (mean, sd)
  double lower = -kInfinity;

  double operator()(double x) const {
    double h = log_std_normal_pdf((x - mean) / sd) - std::log(sd);
    for (const auto& [m, s] : rivals) h += log_std_normal_cdf((x - m) / s);
    return h;
  }

  double slope(double x) const {
    double d = -(x - mean) / (sd * sd);
    for (const auto& [m, s] : rivals) d += normal_reversed_hazard((x - m) / s) / s;
    return d;
  }
};

constexpr double kWindowDrop = 46.0;  // exp(-46) ~ 1e-20 relative to the peak
constexpr int kMinPanels = 8;
constexpr int kMaxPanels = 2048;
constexpr double kRelTol = 1e-10;

double log_integral(const LogIntegrand& h, double a, double b, int panels, double h_ref) {
  const auto& rule = gauss_legendre();
  const double width = (b - a) / panels;
  const double half = 0.5 * width;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int q = 0; q < GaussLegendre16::kOrder; ++q) {
      const double x = mid + half * rule.nodes[q];
      acc += rule.weights[q] * std::exp(h(x) - h_ref);
    }
  }
  return h_ref + std::log(acc * half);
}

double log_alpha(const BeliefState& belief, ArmIndex i) {
  const auto& arms = belief.arms();
  const ArmPosterior& self = arms[i];
  const std::size_t k = arms.size();

  if (self.variance == 0.0) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const ArmPosterior& other = arms[j];
      if (other.variance == 0.0) {
        if (!(self.mean > other.mean)) return -kInfinity;
      } else {
        acc += log_std_normal_cdf((self.mean - other.mean) / other.stddev());
      }
    }
    return acc;
  }

  LogIntegrand h{self.mean, self.stddev(), {}, -kInfinity};
  double scale = h.sd;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == i) continue;
    if (arms[j].variance == 0.0) {
      h.lower = std::max(h.lower, arms[j].mean);
    } else {
      h.rivals.emplace_back(arms[j].mean, arms[j].stddev());
      scale = std::min(scale, arms[j].stddev());
    }
  }

  // The slope is nonnegative at the arm's own mean and decreasing, so the
  // mode lies to its right.
  double lo = h.mean;
  double step = h.sd;
  double hi = h.mean + step;
  for (int it = 0; it < 200 && h.slope(hi) > 0.0; ++it) {
    lo = hi;
    step *= 2.0;
    hi = h.mean + step;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-7 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h.slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mode = std::max(0.5 * (lo + hi), h.lower);
  const double h_mode = h(mode);

  const double d0 = scale / 16.0;
  double b = mode;
  for (double d = d0; d < kInfinity; d *= 2.0) {
    b = mode + d;
    if (h(b) < h_mode - kWindowDrop) break;
  }
  double a = mode;
  for (double d = d0; d < kInfinity; d *= 2.0) {
    a = mode - d;
    if (a <= h.lower) {
      a = h.lower;
      break;
    }
    if (h(a) < h_mode - kWindowDrop) break;
  }
  if (!(b > a)) return -kInfinity;

  double prev = log_integral(h, a, b, kMinPanels, h_mode);
  for (int panels = 2 * kMinPanels; panels <= kMaxPanels; panels *= 2) {
    const double next = log_integral(h, a, b, panels, h_mode);
    if (std::abs(std::expm1(next - prev)) < kRelTol) return next;
    prev = next;
  }
  return prev;
}

}  // namespace

BanditInstance::BanditInstance(std::vector<double> means, double noise_variance)
    : means_(std::move(means)), noise_variance_(noise_variance) {
  if (means_.size() < 2) throw std::invalid_argument("a bandit instance needs at least two arms");
  for (double m : means_) {
    if (!std::isfinite(m)) throw std::invalid_argument("arm means must be finite");
  }
  if (!std::isfinite(noise_variance_) || noise_variance_ < 0.0) {
    throw std::invalid_argument("noise variance must be finite and nonnegative");
  }
}

ArmIndex BanditInstance::best_arm() const noexcept {
  return static_cast<ArmIndex>(std::max_element(means_.begin(), means_.end()) - means_.begin());
}

bool BanditInstance::has_unique_means() const noexcept { return min_gap() > 0.0; }

double BanditInstance::min_gap() const noexcept {
  double gap = kInfinity;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    for (std::size_t j = i + 1; j < means_.size(); ++j) {
      gap = std::min(gap, std::abs(means_[i] - means_[j]));
    }
  }
  return gap;
}

double BanditInstance::max_gap() const noexcept {
  const auto [lo, hi] = std::minmax_element(means_.begin(), means_.end());
  return *hi - *lo;
}

double ArmPosterior::stddev() const noexcept { return std::sqrt(variance); }

BeliefState::BeliefState(std::vector<ArmPosterior> arms, std::size_t step)
    : arms_(std::move(arms)), step_(step) {
  if (arms_.size() < 2) throw std::invalid_argument("a belief needs at least two arms");
  if (step_ < 1) throw std::invalid_argument("belief step is 1-based");
}

std::vector<std::size_t> BeliefState::pull_counts() const {
  std::vector<std::size_t> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.pulls);
  return out;
}

std::vector<double> BeliefState::posterior_means() const {
  std::vector<double> out;
  out.reserve(arms_.size());
  for (const auto& a : arms_) out.push_back(a.mean);
  return out;
}

bool BeliefState::all_proper() const noexcept {
  return std::none_of(arms_.begin(), arms_.end(), [](const ArmPosterior& a) { return a.improper(); });
}

void BeliefState::observe(ArmIndex arm, double y, double noise_variance) {
  check_arm(arms_.size(), arm);
  if (!std::isfinite(y)) throw std::invalid_argument("observation must be finite");
  ArmPosterior& a = arms_[arm];
  if (a.improper() || noise_variance == 0.0) {
    a.mean = y;
    a.variance = noise_variance;
  } else if (a.variance > 0.0) {
    const double precision = 1.0 / a.variance + 1.0 / noise_variance;
    const double variance = 1.0 / precision;
    a.mean = variance * (a.mean / a.variance + y / noise_variance);
    a.variance = variance;
  }
  ++a.pulls;
  ++step_;
}

BeliefState new_belief(std::size_t k, std::optional<std::span<const std::pair<double, double>>> prior) {
  if (k < 2) throw std::invalid_argument("a belief needs at least two arms");
  std::vector<ArmPosterior> arms(k);
  if (prior) {
    if (prior->size() != k) throw std::invalid_argument("prior must supply one (mean, variance) pair per arm");
    for (std::size_t i = 0; i < k; ++i) {
      const auto [m, v] = (*prior)[i];
      if (!(v > 0.0) || !std::isfinite(m)) {
        throw std::invalid_argument("prior variances must be positive and means finite");
      }
      arms[i].mean = m;
      arms[i].variance = v;
    }
  }
  return BeliefState(std::move(arms), 1);
}

BeliefState update(const BeliefState& belief, ArmIndex arm, double y, double noise_variance) {
  BeliefState next = belief;
  next.observe(arm, y, noise_variance);
  return next;
}

ArmIndex posterior_leader(const BeliefState& belief) {
  ArmIndex best = 0;
  double best_mean = -kInfinity;
  bool found = false;
  for (ArmIndex i = 0; i < belief.num_arms(); ++i) {
    const auto& a = belief.arm(i);
    if (a.improper()) continue;
    if (!found || a.mean > best_mean) {
      best = i;
      best_mean = a.mean;
      found = true;
    }
  }
  return best;
}

double ei_value(const BeliefState& belief, ArmIndex i) {
  check_arm(belief.num_arms(), i);
  const auto& a = belief.arm(i);
  if (a.improper()) return kInfinity;
  const double gap = a.mean - belief.arm(posterior_leader(belief)).mean;
  if (a.variance == 0.0) return std::max(gap, 0.0);
  const double s = a.stddev();
  return s * f_ei(gap / s);
}

double log_ei_value(const BeliefState& belief, ArmIndex i) {
  check_arm(belief.num_arms(), i);
  const auto& a = belief.arm(i);
  if (a.improper()) return kInfinity;
  const double gap = a.mean - belief.arm(posterior_leader(belief)).mean;
  if (a.variance == 0.0) return std::log(std::max(gap, 0.0));
  const double s = a.stddev();
  return std::log(s) + log_f_ei(gap / s);
}

double pairwise_ei(const BeliefState& belief, ArmIndex i, ArmIndex j) {
  check_arm(belief.num_arms(), i);
  check_arm(belief.num_arms(), j);
  if (i == j) return 0.0;
  const auto& a = belief.arm(i);
  const auto& b = belief.arm(j);
  if (a.improper() || b.improper()) return kInfinity;
  const double combined = a.variance + b.variance;
  if (combined == 0.0) return std::max(a.mean - b.mean, 0.0);
  const double s = std::sqrt(combined);
  return s * f_ei((a.mean - b.mean) / s);
}

double log_pairwise_ei(const BeliefState& belief, ArmIndex i, ArmIndex j) {
  check_arm(belief.num_arms(), i);
  check_arm(belief.num_arms(), j);
  if (i == j) return -kInfinity;
  const auto& a = belief.arm(i);
  const auto& b = belief.arm(j);
  if (a.improper() || b.improper()) return kInfinity;
  const double combined = a.variance + b.variance;
  if (combined == 0.0) return std::log(std::max(a.mean - b.mean, 0.0));
  return 0.5 * std::log(combined) + log_f_ei((a.mean - b.mean) / std::sqrt(combined));
}

double pairwise_ei_correlated(double mu_i, double mu_j, double s_ii, double s_jj, double s_ij) {
  if (s_ii < 0.0 || s_jj < 0.0) throw std::invalid_argument("variances must be nonnegative");
  const double combined = s_ii + s_jj - 2.0 * s_ij;
  if (combined < 0.0) throw std::invalid_argument("s_ii + s_jj - 2 s_ij must be nonnegative");
  if (combined == 0.0) return std::max(mu_i - mu_j, 0.0);
  const double s = std::sqrt(combined);
  return s * f_ei((mu_i - mu_j) / s);
}

double log_prob_best(const BeliefState& belief, ArmIndex i) {
  check_arm(belief.num_arms(), i);
  require_proper(belief);
  return std::min(log_alpha(belief, i), 0.0);
}

double prob_best(const BeliefState& belief, ArmIndex i) {
  return std::clamp(std::exp(log_prob_best(belief, i)), 0.0, 1.0);
}

std::vector<double> prob_best_all(const BeliefState& belief) {
  std::vector<double> out(belief.num_arms());
  for (ArmIndex i = 0; i < out.size(); ++i) out[i] = prob_best(belief, i);
  return out;
}

double prob_not_best(const BeliefState& belief, ArmIndex i) {
  const double a = prob_best(belief, i);
  if (a <= 1.0 - 1e-12) return 1.0 - a;
  double rest = 0.0;
  for (ArmIndex j = 0; j < belief.num_arms(); ++j) {
    if (j != i) rest += prob_best(belief, j);
  }
  return std::clamp(rest, 0.0, 1.0);
}

double log_prob_not_best(const BeliefState& belief, ArmIndex i) {
  check_arm(belief.num_arms(), i);
  require_proper(belief);
  std::vector<double> logs;
  logs.reserve(belief.num_arms() - 1);
  for (ArmIndex j = 0; j < belief.num_arms(); ++j) {
    if (j != i) logs.push_back(log_alpha(belief, j));
  }
  return std::min(log_sum_exp(logs), 0.0);
}

std::vector<double> prob_best_monte_carlo(const BeliefState& belief, std::size_t draws, Rng& rng) {
  require_proper(belief);
  if (draws == 0) throw std::invalid_argument("need at least one draw");
  const std::size_t k = belief.num_arms();
  std::vector<double> wins(k, 0.0);
  std::normal_distribution<double> z;
  for (std::size_t d = 0; d < draws; ++d) {
    ArmIndex best = 0;
    double best_theta = -kInfinity;
    for (ArmIndex i = 0; i < k; ++i) {
      const auto& a = belief.arm(i);
      const double theta = a.mean + a.stddev() * z(rng);
      if (theta > best_theta) {
        best_theta = theta;
        best = i;
      }
    }
    wins[best] += 1.0;
  }
  for (double& w : wins) w /= static_cast<double>(draws);
  return wins;
}

double simulate_observation(const BanditInstance& instance, ArmIndex arm, Rng& rng) {
  check_arm(instance.num_arms(), arm);
  const double mu = instance.mean(arm);
  if (instance.noise_variance() == 0.0) return mu;
  std::normal_distribution<double> noise(mu, std::sqrt(instance.noise_variance()));
  return noise(rng);
}

}  // namespace ttei
