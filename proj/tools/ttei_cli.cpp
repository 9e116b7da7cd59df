// ttei: command-line front end for the best-arm identification experiments.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ttei/diagnostics.hpp"
#include "ttei/experiment.hpp"
#include "ttei/proportions.hpp"
#include "ttei/report_io.hpp"
#include "ttei/standard_suite.hpp"

namespace {

int fail(std::string_view kind, std::string_view message, int code) {
  std::cerr << ttei::error_record(kind, message).dump() << '\n';
  return code;
}

int run_command(const std::string& config_path, const std::string& trajectory_path, std::size_t threads) {
  auto config = ttei::load_experiment_config(config_path);
  if (!trajectory_path.empty()) config.record_trajectory = true;
  const auto results = ttei::run_trials(config, {threads, {}});
  const auto report = ttei::aggregate(results);
  if (report.censored > 0) {
    std::cerr << "warning: " << report.censored << " of " << report.trials
              << " trials hit horizon_cap and are excluded from mean_samples\n";
  }
  ttei::write_report_csv_header(std::cout);
  ttei::write_report_csv_row(std::cout, config, report);
  if (!trajectory_path.empty()) {
    std::ofstream out(trajectory_path);
    if (!out) throw std::runtime_error("cannot write trajectories to " + trajectory_path);
    for (const auto& r : results) ttei::write_trajectory_ndjson(out, r);
  }
  return 0;
}

int table_command(const ttei::TableSpec& spec, std::uint64_t seed, std::size_t threads, bool csv) {
  const auto table = ttei::run_table(spec, seed, {threads, {}});
  if (csv) {
    ttei::write_report_csv_header(std::cout);
    for (const auto& cell : table.cells) ttei::write_report_csv_row(std::cout, cell.config, cell.report);
  } else {
    ttei::print_table(std::cout, table);
  }
  return 0;
}

int proportions_command(const std::vector<double>& means, double sigma2, double beta) {
  const auto plug = ttei::perturb_duplicates(means);
  if (plug != means) std::cerr << "note: tied means separated by perturb_duplicates before solving\n";
  const auto alloc = ttei::solve_proportions(plug, sigma2, beta);
  const auto summary = ttei::solve_optimal_beta(plug, sigma2, beta);
  nlohmann::json out = {{"means", means},
                        {"noise_variance", sigma2},
                        {"beta", beta},
                        {"w_beta", alloc.w.weights()},
                        {"gamma_beta", alloc.gamma_beta},
                        {"beta_star", summary.beta_star},
                        {"gamma_star", summary.gamma_star},
                        {"w_star", summary.w_star.weights()}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int diagnose_command(const std::string& config_path, double epsilon, double window, std::size_t threads) {
  auto config = ttei::load_experiment_config(config_path);
  const auto report = ttei::diagnose_experiment(config, {epsilon, window}, {threads, {}});
  std::cout << ttei::to_json(report).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-two expected improvement and best-arm identification experiments"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string config_path;
  std::string trajectory_path;
  auto* run = app.add_subcommand("run", "Run one experiment configuration; CSV report on stdout");
  run->add_option("--config", config_path, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--trajectories", trajectory_path, "Write per-step NDJSON trajectories here");

  std::uint64_t seed = 1;
  bool csv = false;
  auto* table1 = app.add_subcommand("table1", "TTEI-1/2 vs EI, c = 0.95, 100 trials per cell");
  auto* table2 = app.add_subcommand("table2", "Seven policies, c = 0.9999, 200 trials per cell");
  for (auto* sub : {table1, table2}) {
    sub->add_option("--seed", seed, "Base seed");
    sub->add_flag("--csv", csv, "Emit CSV rows instead of the text table");
  }

  std::vector<double> means;
  double sigma2 = 1.0;
  double beta = 0.5;
  auto* props = app.add_subcommand("proportions", "Print w^beta, Gamma*_beta, beta* and Gamma*");
  props->add_option("--means", means, "Arm means, comma separated")->required()->delimiter(',');
  props->add_option("--sigma2", sigma2, "Noise variance");
  props->add_option("--beta", beta, "Best-arm share for w^beta");

  double epsilon = 0.05;
  double window = 0.5;
  auto* diagnose = app.add_subcommand("diagnose", "Long-horizon run: convergence times and exponent fits");
  diagnose->add_option("--config", config_path, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--epsilon", epsilon, "Tolerance for the convergence time");
  diagnose->add_option("--window", window, "Trailing fraction used by the exponent fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 64);
  }

  try {
    if (*run) return run_command(config_path, trajectory_path, threads);
    if (*table1) return table_command(ttei::confidence_table_small(), seed, threads, csv);
    if (*table2) return table_command(ttei::confidence_table_large(), seed, threads, csv);
    if (*props) return proportions_command(means, sigma2, beta);
    if (*diagnose) return diagnose_command(config_path, epsilon, window, threads);
  } catch (const ttei::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail("invalid_argument", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 1);
  }
  return 0;
}
