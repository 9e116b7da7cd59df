#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ttei/diagnostics.hpp"
#include "ttei/experiment.hpp"

namespace ttei {

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses an experiment configuration. Accepts nested objects
/// ({"instance": {"means": ...}}) or flat dotted keys ("instance.means").
/// See docs/formats.md for the schema. Throws ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Canonical label for a policy, e.g. "TTEI-0.5", "aTTEI", "RSO".
std::string policy_label(const PolicyConfig& policy);

inline constexpr std::string_view kReportCsvHeader =
    "instance_id,policy,stop,trials,mean_samples,stderr,error_rate,censored";

void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const ExperimentConfig& config, const AggregateReport& report);

/// One JSON object per trajectory record, tagged with the trial index.
void write_trajectory_ndjson(std::ostream& out, const TrialResult& trial);

nlohmann::json to_json(const TrajectoryRecord& record);
nlohmann::json to_json(const AggregateReport& report);
nlohmann::json to_json(const DiagnosticsReport& report);

/// {"error": {"kind": ..., "message": ...}}
nlohmann::json error_record(std::string_view kind, std::string_view message);

}  // namespace ttei
