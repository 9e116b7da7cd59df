#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttei/experiment.hpp"

namespace ttei {

/// Benchmark instance: k = 5 arms, sigma^2 = 1.
struct SuiteInstance {
  std::string id;
  std::vector<double> means;
};

/// [5,4,1,1,1], [5,4,3,2,1], [2,.8,.6,.4,.2].
std::vector<SuiteInstance> standard_instances();

/// A column of a table: a policy kind plus how its beta is chosen.
struct PolicySpec {
  std::string label;
  PolicyKind kind = PolicyKind::TTEI;
  /// Fixed beta; empty means "use beta* of the instance" for TTEI/TTTS.
  std::optional<double> beta;
};

struct TableSpec {
  std::string title;
  double confidence = 0.95;
  std::size_t trials = 100;
  std::vector<PolicySpec> policies;
};

/// TTEI-1/2 vs EI at c = 0.95 over 100 trials.
TableSpec confidence_table_small();
/// TTEI-1/2, aTTEI, TTEI-beta*, TTTS-beta*, RSO, TO, KG at c = 0.9999 over
/// 200 trials.
TableSpec confidence_table_large();

/// Experiment for one (instance, policy) cell. Tied means are separated by
/// perturb_duplicates before beta* and w* are solved; the simulated
/// instance keeps the original means.
ExperimentConfig make_suite_config(const SuiteInstance& instance, const PolicySpec& policy,
                                   const StopRule& stop, std::size_t trials, std::uint64_t base_seed);

struct TableCell {
  std::string instance_id;
  std::string policy_label;
  ExperimentConfig config;
  AggregateReport report;
};

struct TableResult {
  TableSpec spec;
  std::vector<TableCell> cells;  // row-major: instance, then policy

  const TableCell& at(std::size_t instance, std::size_t policy) const {
    return cells.at(instance * spec.policies.size() + policy);
  }
};

TableResult run_table(const TableSpec& spec, std::uint64_t base_seed, const RunOptions& options = {});

/// Fixed-width text table: one row per instance, one column per policy,
/// entries are mean sample counts.
void print_table(std::ostream& out, const TableResult& table);

}  // namespace ttei
