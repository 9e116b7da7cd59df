#include "ttei/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttei {
namespace {

bool within(const TrajectoryRecord& r, const ProportionVector& w, double eps, std::span<const double> mu) {
  const double n = static_cast<double>(r.n);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (std::abs(r.means[i] - mu[i]) > eps) return false;
    if (std::abs(static_cast<double>(r.counts[i]) / n - w[i]) > eps) return false;
  }
  return true;
}

}  // namespace

std::optional<std::size_t> measure_convergence_time(std::span<const TrajectoryRecord> trajectory,
                                                    const ProportionVector& w_target, double epsilon,
                                                    std::span<const double> true_means) {
  const std::size_t k = true_means.size();
  if (w_target.size() != k) throw std::invalid_argument("target allocation and means differ in length");
  if (trajectory.empty()) throw std::invalid_argument("empty trajectory");
  for (const auto& r : trajectory) {
    if (r.counts.size() != k || r.means.size() != k || r.n == 0) {
      throw std::invalid_argument("trajectory records need per-arm counts and means");
    }
  }
  std::optional<std::size_t> first;
  for (auto it = trajectory.rbegin(); it != trajectory.rend(); ++it) {
    if (!within(*it, w_target, epsilon, true_means)) break;
    first = it->n;
  }
  return first;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need at least two paired points");
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("x values must not all coincide");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      rss += e * e;
    }
    fit.slope_stderr = std::sqrt(rss / (m - 2.0) / sxx);
  }
  return fit;
}

LinearFit estimate_exponent(std::span<const TrajectoryRecord> trajectory, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("window must lie in (0, 1]");
  std::vector<const TrajectoryRecord*> usable;
  for (const auto& r : trajectory) {
    if (std::isfinite(r.log_one_minus_alpha_best)) usable.push_back(&r);
  }
  const auto skip = static_cast<std::size_t>(std::floor((1.0 - window) * static_cast<double>(usable.size())));
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = skip; i < usable.size(); ++i) {
    x.push_back(static_cast<double>(usable[i]->n));
    y.push_back(-usable[i]->log_one_minus_alpha_best);
  }
  if (x.size() < 10) throw std::invalid_argument("exponent fit needs at least 10 points in the window");
  return fit_line(x, y);
}

std::vector<CurvePoint> sample_complexity_curve(const ExperimentConfig& config_template,
                                                std::span<const double> deltas, const RunOptions& options) {
  const auto* chernoff = std::get_if<ChernoffStop>(&config_template.stop);
  if (!chernoff) throw std::invalid_argument("sample-complexity curves need Chernoff stopping");
  if (deltas.empty()) throw std::invalid_argument("need at least one delta");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must be strictly decreasing");
  }
  std::vector<CurvePoint> curve;
  for (double delta : deltas) {
    ExperimentConfig config = config_template;
    ChernoffStop stop = *chernoff;
    stop.glr.delta = delta;
    config.stop = stop;
    const auto report = run_experiment(config, options);
    curve.push_back({delta, report.mean_samples, report.stderr_samples, report.error_rate, report.censored});
  }
  return curve;
}

LinearFit sample_complexity_slope(std::span<const CurvePoint> curve) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : curve) {
    x.push_back(std::log(1.0 / p.delta));
    y.push_back(p.mean_tau);
  }
  return fit_line(x, y);
}

DiagnosticsReport diagnose_experiment(ExperimentConfig config, const DiagnoseOptions& options,
                                      const RunOptions& run_options) {
  config.record_trajectory = true;
  const auto& means = config.instance.means();
  const double noise = config.instance.noise_variance();

  DiagnosticsReport report;
  const auto plug = perturb_duplicates(means);
  const PolicyKind kind = config.policy.kind;
  if ((kind == PolicyKind::TTEI || kind == PolicyKind::TTTS) && config.policy.beta < 1.0) {
    report.beta = config.policy.beta;
    auto alloc = solve_proportions(plug, noise, report.beta);
    report.w_target = std::move(alloc.w);
    report.gamma_beta = alloc.gamma_beta;
  } else {
    auto summary = solve_optimal_beta(plug, noise);
    report.beta = summary.beta_star;
    report.w_target = summary.w_star;
    report.gamma_beta = summary.gamma_star;
  }

  const auto results = run_trials(config, run_options);
  double exponent_sum = 0.0;
  std::size_t exponent_count = 0;
  double gap_sum = 0.0;
  for (const auto& r : results) {
    TrialDiagnostics d;
    d.trial_index = r.trial_index;
    const auto& traj = *r.trajectory;
    if (!traj.empty()) {
      d.convergence_time = measure_convergence_time(traj, report.w_target, options.epsilon, means);
      try {
        d.exponent = estimate_exponent(traj, options.window);
        exponent_sum += d.exponent->slope;
        ++exponent_count;
      } catch (const std::invalid_argument&) {
      }
    }
    for (std::size_t i = 0; i < means.size(); ++i) {
      const double p = static_cast<double>(r.final_counts[i]) / static_cast<double>(r.samples_used);
      d.max_proportion_gap = std::max(d.max_proportion_gap, std::abs(p - report.w_target[i]));
    }
    gap_sum += d.max_proportion_gap;
    if (d.convergence_time) ++report.converged;
    report.trials.push_back(std::move(d));
  }
  if (exponent_count) report.mean_exponent = exponent_sum / static_cast<double>(exponent_count);
  report.mean_max_proportion_gap = gap_sum / static_cast<double>(results.size());
  return report;
}

}  // namespace ttei
