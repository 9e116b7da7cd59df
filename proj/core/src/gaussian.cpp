#include "ttei/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace ttei {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kTailSwitch = 3.0;
constexpr int kContinuedFractionTerms = 60;

// g(t) = 1 / (t + 2 / (t + 3 / (t + ...))), so that R(t) = 1 / (t + g(t)).
// Evaluated backward; 60 terms reach full double precision for t >= 3.
double mills_tail(double t) noexcept {
  double acc = 0.0;
  for (int k = kContinuedFractionTerms; k >= 2; --k) {
    acc = k / (t + acc);
  }
  return 1.0 / (t + acc);
}

}  // namespace

double std_normal_pdf(double x) noexcept {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double log_std_normal_pdf(double x) noexcept { return -0.5 * x * x - kLogSqrt2Pi; }

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_std_normal_cdf(double x) noexcept {
  if (x < -kTailSwitch) {
    const double t = -x;
    return log_std_normal_pdf(t) - std::log(t + mills_tail(t));
  }
  if (x > 0.0) {
    return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  }
  return std::log(std_normal_cdf(x));
}

double normal_reversed_hazard(double x) noexcept {
  if (x < -kTailSwitch) {
    const double t = -x;
    return t + mills_tail(t);
  }
  return std_normal_pdf(x) / std_normal_cdf(x);
}

double mills_ratio(double t) noexcept {
  if (t > kTailSwitch) {
    return 1.0 / (t + mills_tail(t));
  }
  return std_normal_cdf(-t) / std_normal_pdf(t);
}

double f_ei(double x) noexcept {
  if (x < -kTailSwitch) {
    const double t = -x;
    const double g = mills_tail(t);
    return std_normal_pdf(t) * (g / (t + g));
  }
  return x * std_normal_cdf(x) + std_normal_pdf(x);
}

double log_f_ei(double x) noexcept {
  if (x < -kTailSwitch) {
    const double t = -x;
    const double g = mills_tail(t);
    return log_std_normal_pdf(t) + std::log(g) - std::log(t + g);
  }
  return std::log(f_ei(x));
}

}  // namespace ttei
