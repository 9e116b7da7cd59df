#include "ttei/standard_suite.hpp"

#include <iomanip>
#include <ostream>

#include "ttei/proportions.hpp"

namespace ttei {

std::vector<SuiteInstance> standard_instances() {
  return {
      {"[5,4,1,1,1]", {5.0, 4.0, 1.0, 1.0, 1.0}},
      {"[5,4,3,2,1]", {5.0, 4.0, 3.0, 2.0, 1.0}},
      {"[2,.8,.6,.4,.2]", {2.0, 0.8, 0.6, 0.4, 0.2}},
  };
}

TableSpec confidence_table_small() {
  return {"Average number of measurements to reach c = 0.95 (100 trials)",
          0.95,
          100,
          {{"TTEI-1/2", PolicyKind::TTEI, 0.5}, {"EI", PolicyKind::EI, std::nullopt}}};
}

TableSpec confidence_table_large() {
  return {"Average number of measurements to reach c = 0.9999 (200 trials)",
          0.9999,
          200,
          {
              {"TTEI-1/2", PolicyKind::TTEI, 0.5},
              {"aTTEI", PolicyKind::aTTEI, std::nullopt},
              {"TTEI-beta*", PolicyKind::TTEI, std::nullopt},
              {"TTTS-beta*", PolicyKind::TTTS, std::nullopt},
              {"RSO", PolicyKind::RSO, std::nullopt},
              {"TO", PolicyKind::TO, std::nullopt},
              {"KG", PolicyKind::KG, std::nullopt},
          }};
}

ExperimentConfig make_suite_config(const SuiteInstance& instance, const PolicySpec& policy,
                                   const StopRule& stop, std::size_t trials, std::uint64_t base_seed) {
  constexpr double kNoise = 1.0;
  ExperimentConfig config;
  config.instance = BanditInstance(instance.means, kNoise);
  config.instance_id = instance.id;
  config.stop = stop;
  config.trials = trials;
  config.base_seed = base_seed;
  config.policy.kind = policy.kind;

  const auto summary = solve_optimal_beta(perturb_duplicates(instance.means), kNoise);
  switch (policy.kind) {
    case PolicyKind::TTEI:
    case PolicyKind::TTTS:
      config.policy.beta = policy.beta.value_or(summary.beta_star);
      break;
    case PolicyKind::RSO:
    case PolicyKind::TO:
      config.policy.oracle_w = summary.w_star;
      break;
    default:
      break;
  }
  return config;
}

TableResult run_table(const TableSpec& spec, std::uint64_t base_seed, const RunOptions& options) {
  TableResult table{spec, {}};
  const StopRule stop = ConfidenceStop{spec.confidence, 1};
  for (const auto& instance : standard_instances()) {
    for (const auto& policy : spec.policies) {
      TableCell cell{instance.id, policy.label,
                     make_suite_config(instance, policy, stop, spec.trials, base_seed), {}};
      cell.report = run_experiment(cell.config, options);
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

void print_table(std::ostream& out, const TableResult& table) {
  const auto instances = standard_instances();
  constexpr int kFirst = 18;
  constexpr int kWidth = 12;
  out << table.spec.title << '\n';
  out << std::left << std::setw(kFirst) << "" << std::right;
  for (const auto& p : table.spec.policies) out << std::setw(kWidth) << p.label;
  out << '\n';
  out << std::fixed << std::setprecision(2);
  for (std::size_t r = 0; r < instances.size(); ++r) {
    out << std::left << std::setw(kFirst) << instances[r].id << std::right;
    for (std::size_t c = 0; c < table.spec.policies.size(); ++c) {
      out << std::setw(kWidth) << table.at(r, c).report.mean_samples;
    }
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace ttei
