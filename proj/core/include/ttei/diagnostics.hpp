#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ttei/experiment.hpp"
#include "ttei/proportions.hpp"

namespace ttei {

/// Smallest recorded n from which every later record (through the end of
/// the trajectory) has |mu_{n,i} - mu_i| <= epsilon and
/// |T_{n,i}/n - w_i| <= epsilon for all arms. Empty if the last record
/// fails. This is a finite-horizon lower estimate of the true convergence
/// time, which also quantifies over periods beyond the recording.
std::optional<std::size_t> measure_convergence_time(std::span<const TrajectoryRecord> trajectory,
                                                    const ProportionVector& w_target, double epsilon,
                                                    std::span<const double> true_means);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of -log(1 - alpha_{n,best}) against n over the
/// trailing `window` fraction of the records that carry a posterior
/// probability. Throws std::invalid_argument with fewer than 10 points.
LinearFit estimate_exponent(std::span<const TrajectoryRecord> trajectory, double window);

struct CurvePoint {
  double delta = 0.0;
  double mean_tau = 0.0;
  double stderr_tau = 0.0;
  double error_rate = 0.0;
  std::size_t censored = 0;
};

/// One experiment per delta (must be strictly decreasing) with Chernoff
/// stopping; other settings are taken from `config_template`.
std::vector<CurvePoint> sample_complexity_curve(const ExperimentConfig& config_template,
                                                std::span<const double> deltas,
                                                const RunOptions& options = {});

/// Slope of mean_tau against log(1/delta).
LinearFit sample_complexity_slope(std::span<const CurvePoint> curve);

struct TrialDiagnostics {
  std::size_t trial_index = 0;
  std::optional<std::size_t> convergence_time;
  std::optional<LinearFit> exponent;
  double max_proportion_gap = 0.0;  // max_i |T_i/n - w_i| at the end
};

struct DiagnosticsReport {
  ProportionVector w_target;
  double beta = 0.5;
  double gamma_beta = 0.0;  // predicted exponent for w_target
  std::vector<TrialDiagnostics> trials;
  double mean_exponent = 0.0;
  double mean_max_proportion_gap = 0.0;
  std::size_t converged = 0;
};

struct DiagnoseOptions {
  double epsilon = 0.05;
  double window = 0.5;
};

/// Long-horizon run with trajectories; the target allocation is w^beta for
/// TTEI/TTTS, w* for aTTEI and the oracle policies, and undefined for EI
/// and KG (diagnosed against w* anyway).
DiagnosticsReport diagnose_experiment(ExperimentConfig config, const DiagnoseOptions& options,
                                      const RunOptions& run_options = {});

}  // namespace ttei
