#include "ttei/report_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ttei {
namespace {

using nlohmann::json;

json unflatten_dotted(const json& doc) {
  bool dotted = false;
  for (const auto& [key, _] : doc.items()) {
    if (key.find('.') != std::string::npos) dotted = true;
  }
  if (!dotted) return doc;
  json out = json::object();
  for (const auto& [key, value] : doc.items()) {
    std::string pointer = "/" + key;
    for (auto& ch : pointer) {
      if (ch == '.') ch = '/';
    }
    out[json::json_pointer(pointer)] = value;
  }
  return out;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  return obj[key].get<T>();
}

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(std::string("missing key '") + where + "." + key + "'");
  }
  return obj[key];
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string default_instance_id(const std::vector<double>& means) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < means.size(); ++i) out << (i ? ";" : "") << means[i];
  out << ']';
  return out.str();
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

ExperimentConfig parse_experiment_config(const json& raw) {
  if (!raw.is_object()) throw ConfigError("configuration must be a JSON object");
  const json doc = unflatten_dotted(raw);
  try {
    ExperimentConfig config;
    const json& inst = require(doc, "instance", "");
    auto means = require(inst, "means", "instance").get<std::vector<double>>();
    const double noise = get_or(inst, "noise_variance", 1.0);
    config.instance = BanditInstance(means, noise);
    config.instance_id = get_or<std::string>(inst, "id", default_instance_id(means));

    const json& pol = require(doc, "policy", "");
    config.policy.kind = parse_policy_kind(require(pol, "kind", "policy").get<std::string>());
    const auto plug = perturb_duplicates(means);
    auto beta_star = [&] { return solve_optimal_beta(plug, noise > 0.0 ? noise : 1.0).beta_star; };
    if (pol.contains("beta")) {
      const json& b = pol["beta"];
      if (b.is_string()) {
        if (b.get<std::string>() != "star") throw ConfigError("policy.beta must be a number or \"star\"");
        config.policy.beta = beta_star();
      } else {
        config.policy.beta = b.get<double>();
      }
    }
    config.policy.refresh_period = get_or<std::size_t>(pol, "refresh_period", 10);
    config.policy.max_resamples = get_or<std::size_t>(pol, "max_resamples", 100);
    if (pol.contains("oracle_w")) {
      config.policy.oracle_w = ProportionVector(pol["oracle_w"].get<std::vector<double>>());
    } else if (config.policy.kind == PolicyKind::RSO || config.policy.kind == PolicyKind::TO) {
      config.policy.oracle_w = solve_optimal_beta(plug, noise > 0.0 ? noise : 1.0).w_star;
    }

    const json& stop = require(doc, "stop", "");
    const auto kind = require(stop, "kind", "stop").get<std::string>();
    if (kind == "confidence") {
      config.stop = ConfidenceStop{require(stop, "c", "stop").get<double>(), get_or<std::size_t>(stop, "check_every", 1)};
    } else if (kind == "chernoff") {
      GlrConfig glr;
      glr.delta = require(stop, "delta", "stop").get<double>();
      glr.alpha = get_or(stop, "alpha", glr.alpha);
      glr.c_const = get_or(stop, "c_const", glr.c_const);
      config.stop = ChernoffStop{glr};
    } else if (kind == "horizon") {
      config.stop = HorizonStop{require(stop, "n_max", "stop").get<std::size_t>()};
    } else {
      throw ConfigError("stop.kind must be confidence, chernoff or horizon");
    }

    config.trials = get_or<std::size_t>(doc, "trials", config.trials);
    config.base_seed = get_or<std::uint64_t>(doc, "base_seed", config.base_seed);
    config.horizon_cap = get_or<std::size_t>(doc, "horizon_cap", config.horizon_cap);
    config.record_trajectory = get_or(doc, "record_trajectory", false);
    config.alpha_stride = get_or<std::size_t>(doc, "alpha_stride", 1);
    config.validate();
    return config;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_experiment_config(doc);
}

std::string policy_label(const PolicyConfig& policy) {
  std::ostringstream out;
  out << to_string(policy.kind);
  if (policy.kind == PolicyKind::TTEI || policy.kind == PolicyKind::TTTS) {
    out << '-' << std::setprecision(6) << policy.beta;
  }
  return out.str();
}

void write_report_csv_header(std::ostream& out) { out << kReportCsvHeader << '\n'; }

void write_report_csv_row(std::ostream& out, const ExperimentConfig& config, const AggregateReport& report) {
  out << csv_field(config.instance_id) << ',' << csv_field(policy_label(config.policy)) << ','
      << csv_field(describe(config.stop)) << ',' << report.trials << ',' << std::setprecision(10)
      << report.mean_samples << ',' << report.stderr_samples << ',' << report.error_rate << ',' << report.censored
      << '\n';
}

json to_json(const TrajectoryRecord& r) {
  return {{"n", r.n},
          {"chosen", r.chosen},
          {"alpha_best", finite_or_null(r.alpha_best)},
          {"log_one_minus_alpha_best", finite_or_null(r.log_one_minus_alpha_best)},
          {"z", finite_or_null(r.z)},
          {"counts", r.counts},
          {"means", r.means}};
}

void write_trajectory_ndjson(std::ostream& out, const TrialResult& trial) {
  if (!trial.trajectory) return;
  for (const auto& r : *trial.trajectory) {
    json line = to_json(r);
    line["trial"] = trial.trial_index;
    out << line.dump() << '\n';
  }
}

json to_json(const AggregateReport& report) {
  return {{"trials", report.trials},
          {"censored", report.censored},
          {"mean_samples", report.mean_samples},
          {"stderr_samples", report.stderr_samples},
          {"error_rate", report.error_rate},
          {"mean_proportions", report.mean_proportions}};
}

json to_json(const DiagnosticsReport& report) {
  json trials = json::array();
  for (const auto& t : report.trials) {
    json entry = {{"trial", t.trial_index}, {"max_proportion_gap", t.max_proportion_gap}};
    entry["convergence_time"] = t.convergence_time ? json(*t.convergence_time) : json(nullptr);
    if (t.exponent) {
      entry["exponent"] = t.exponent->slope;
      entry["exponent_stderr"] = t.exponent->slope_stderr;
    } else {
      entry["exponent"] = nullptr;
    }
    trials.push_back(std::move(entry));
  }
  return {{"w_target", report.w_target.weights()},
          {"beta", report.beta},
          {"gamma_beta", report.gamma_beta},
          {"mean_exponent", report.mean_exponent},
          {"mean_max_proportion_gap", report.mean_max_proportion_gap},
          {"converged", report.converged},
          {"trials", std::move(trials)}};
}

json error_record(std::string_view kind, std::string_view message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace ttei
