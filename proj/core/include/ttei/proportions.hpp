#pragma once

#include <span>
#include <vector>

namespace ttei {

/// Allocation weights on the probability simplex.
class ProportionVector {
 public:
  ProportionVector() = default;
  /// Throws std::invalid_argument unless weights are nonnegative and sum to
  /// 1 within 1e-9.
  explicit ProportionVector(std::vector<double> weights);

  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_.at(i); }
  std::size_t size() const noexcept { return weights_.size(); }

  static ProportionVector uniform(std::size_t k);

 private:
  std::vector<double> weights_;
};

struct Allocation {
  ProportionVector w;
  double gamma_beta = 0.0;
};

struct ComplexitySummary {
  double gamma_beta = 0.0;  // at `beta`
  double beta = 0.5;
  double gamma_star = 0.0;
  double beta_star = 0.5;
  ProportionVector w_star;
};

/// The allocation w^beta that gives the best arm exactly `beta` and
/// equalizes (mu_i - mu_best)^2 / (1/w_i + 1/beta) across the other arms,
/// together with the common exponent Gamma*_beta = value / (2 sigma^2).
///
/// Weights come back in the caller's arm order. Throws
/// std::invalid_argument for duplicate means, beta outside (0, 1), fewer
/// than two arms, or a nonpositive noise variance.
Allocation solve_proportions(std::span<const double> means, double noise_variance, double beta);

/// min over suboptimal i of (mu_i - mu_best)^2 / (2 sigma^2 (1/w_i + 1/w_best)).
double complexity_of_allocation(std::span<const double> means, double noise_variance,
                                const ProportionVector& w);

/// beta* = argmax Gamma*_beta and Gamma* = Gamma*_{beta*}. Golden-section
/// search guarded by a 1e-3 grid scan. `beta` selects which Gamma*_beta is
/// reported alongside.
ComplexitySummary solve_optimal_beta(std::span<const double> means, double noise_variance,
                                     double beta = 0.5);

/// Adds j * step to the j-th repeat of any value already seen, scanning left
/// to right, until all entries are distinct.
std::vector<double> perturb_duplicates(std::span<const double> means, double step = 1e-9);

}  // namespace ttei
