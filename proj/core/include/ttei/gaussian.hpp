#pragma once

// Scalar standard-normal utilities and the expected-improvement kernel
// f(x) = x * Phi(x) + phi(x).

namespace ttei {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

double std_normal_pdf(double x) noexcept;
double log_std_normal_pdf(double x) noexcept;

/// Standard normal CDF, accurate to double precision relative error in both
/// tails (computed from erfc).
double std_normal_cdf(double x) noexcept;

/// log Phi(x). Finite for every finite x; uses the Mills ratio below -3.
double log_std_normal_cdf(double x) noexcept;

/// phi(x) / Phi(x), the reversed hazard of the standard normal. Stable for
/// very negative x, where it approaches -x.
double normal_reversed_hazard(double x) noexcept;

/// Mills ratio R(t) = (1 - Phi(t)) / phi(t) for t >= 0.
double mills_ratio(double t) noexcept;

/// f(x) = x Phi(x) + phi(x), i.e. E[(x + Z)^+] for Z ~ N(0, 1).
///
/// Positive and strictly increasing. For x < -3 the value is evaluated as
/// phi(x) * g / (|x| + g) with g a continued-fraction tail of the Mills
/// ratio, so there is no cancellation between x Phi(x) and phi(x). Below
/// roughly -38.5 the result underflows to exactly 0; use log_f_ei there.
double f_ei(double x) noexcept;

/// log f(x), finite for every finite x.
double log_f_ei(double x) noexcept;

}  // namespace ttei
