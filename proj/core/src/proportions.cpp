#include "ttei/proportions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace ttei {
namespace {

std::size_t best_index(std::span<const double> means) {
  return static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
}

void require_distinct(std::span<const double> means) {
  std::vector<double> sorted(means.begin(), means.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("optimal proportions need pairwise distinct means");
  }
}

void validate(std::span<const double> means, double noise_variance) {
  if (means.size() < 2) throw std::invalid_argument("need at least two arms");
  for (double m : means) {
    if (!std::isfinite(m)) throw std::invalid_argument("means must be finite");
  }
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument("noise variance must be positive");
  }
  require_distinct(means);
}

// Gamma*_beta without input validation; `gaps2` holds the squared gaps of
// the suboptimal arms.
double equalized_exponent(std::span<const double> gaps2, double beta, std::vector<double>* weights) {
  double min_gap2 = std::numeric_limits<double>::infinity();
  for (double g : gaps2) min_gap2 = std::min(min_gap2, g);

  auto weight = [beta](double gap2, double c) { return c * beta / (beta * gap2 - c); };
  auto excess = [&](double c) {
    double s = 0.0;
    for (double g : gaps2) s += weight(g, c);
    return s - (1.0 - beta);
  };

  // Total suboptimal weight is increasing in the common value c on
  // (0, beta * min_gap2), from 0 to +infinity.
  double lo = 0.0;
  double hi = beta * min_gap2;
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    c = 0.5 * (lo + hi);
    if (c <= lo || c >= hi) break;
    const double e = excess(c);
    if (std::abs(e) < 1e-12) break;
    (e < 0.0 ? lo : hi) = c;
  }
  if (weights) {
    weights->clear();
    double total = 0.0;
    for (double g : gaps2) {
      weights->push_back(weight(g, c));
      total += weights->back();
    }
    for (double& w : *weights) w *= (1.0 - beta) / total;
  }
  return c;
}

std::vector<double> squared_gaps(std::span<const double> means, std::size_t best) {
  std::vector<double> out;
  out.reserve(means.size() - 1);
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i != best) out.push_back((means[i] - means[best]) * (means[i] - means[best]));
  }
  return out;
}

template <class F>
double golden_section_max(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ProportionVector::ProportionVector(std::vector<double> weights) : weights_(std::move(weights)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
    total += w;
  }
  if (weights_.empty() || std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("weights must sum to 1");
  }
}

ProportionVector ProportionVector::uniform(std::size_t k) {
  return ProportionVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

Allocation solve_proportions(std::span<const double> means, double noise_variance, double beta) {
  validate(means, noise_variance);
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");

  const std::size_t best = best_index(means);
  const auto gaps2 = squared_gaps(means, best);
  std::vector<double> sub;
  const double c = equalized_exponent(gaps2, beta, &sub);

  std::vector<double> w(means.size());
  w[best] = beta;
  for (std::size_t i = 0, s = 0; i < means.size(); ++i) {
    if (i != best) w[i] = sub[s++];
  }
  return {ProportionVector(std::move(w)), c / (2.0 * noise_variance)};
}

double complexity_of_allocation(std::span<const double> means, double noise_variance,
                                const ProportionVector& w) {
  if (w.size() != means.size()) throw std::invalid_argument("allocation and means differ in length");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise variance must be positive");
  const std::size_t best = best_index(means);
  if (!(w[best] > 0.0)) throw std::invalid_argument("best arm must receive positive weight");
  double value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i == best) continue;
    if (w[i] == 0.0) return 0.0;
    const double gap = means[i] - means[best];
    value = std::min(value, gap * gap / (2.0 * noise_variance * (1.0 / w[i] + 1.0 / w[best])));
  }
  return value;
}

ComplexitySummary solve_optimal_beta(std::span<const double> means, double noise_variance, double beta) {
  validate(means, noise_variance);
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");

  const std::size_t best = best_index(means);
  const auto gaps2 = squared_gaps(means, best);
  auto gamma = [&](double b) { return equalized_exponent(gaps2, b, nullptr); };

  constexpr double kEdge = 1e-4;
  constexpr double kTol = 1e-6;
  double beta_star = golden_section_max(gamma, kEdge, 1.0 - kEdge, kTol);
  double value = gamma(beta_star);

  // Unimodality in beta is not guaranteed; cross-check against a grid.
  double grid_beta = beta_star;
  double grid_value = value;
  for (int i = 1; i < 1000; ++i) {
    const double b = i * 1e-3;
    const double v = gamma(b);
    if (v > grid_value) {
      grid_value = v;
      grid_beta = b;
    }
  }
  if (grid_value > value + 1e-9) {
    beta_star = golden_section_max(gamma, std::max(kEdge, grid_beta - 1e-3),
                                   std::min(1.0 - kEdge, grid_beta + 1e-3), kTol);
    value = gamma(beta_star);
  }

  ComplexitySummary out;
  out.beta = beta;
  out.gamma_beta = solve_proportions(means, noise_variance, beta).gamma_beta;
  auto star = solve_proportions(means, noise_variance, beta_star);
  out.beta_star = beta_star;
  out.gamma_star = star.gamma_beta;
  out.w_star = std::move(star.w);
  return out;
}

std::vector<double> perturb_duplicates(std::span<const double> means, double step) {
  std::vector<double> out(means.begin(), means.end());
  for (int pass = 0; pass < 16; ++pass) {
    std::map<double, int> seen;
    bool changed = false;
    for (double& m : out) {
      const int repeat = seen[m]++;
      if (repeat > 0) {
        m += repeat * step;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace ttei
