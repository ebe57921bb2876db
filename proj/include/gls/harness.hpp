#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gls {

using Json = nlohmann::ordered_json;

struct MixedStructure {
  std::vector<int> m;
  std::vector<double> p;
};

struct ExperimentConfig {
  std::string experiment = "all";
  std::uint64_t seed = 20240601;
  std::vector<int> dims = {1, 2, 3};
  std::map<std::string, double> tolerances;
  std::map<std::string, long> samples;
  std::vector<MixedStructure> mixed_structures;
  std::string out = "reports";
  bool parallel = false;

  /// Override or default for a named tolerance; unknown names throw.
  double tolerance(const std::string& key) const;
  long sample_count(const std::string& key) const;
  std::vector<MixedStructure> structures() const;
  Json to_json() const;
};

/// Parses a config object; unknown keys, tolerance or sample names and
/// experiment names are rejected with ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& experiment_names();
const std::map<std::string, double>& default_tolerances();
const std::map<std::string, long>& default_samples();

enum class Verdict { pass, fail, info };
const char* to_string(Verdict v);

struct ReportRow {
  std::string id;
  Json inputs = Json::object();
  std::optional<double> predicted;
  std::optional<double> measured;
  std::optional<double> error_bound;
  std::optional<double> tolerance;
  Verdict verdict = Verdict::info;
  std::string note;
};

struct Report {
  std::string experiment;
  std::uint64_t seed = 0;
  Json config = Json::object();
  std::vector<ReportRow> rows;
  double wall_clock_s = 0.0;

  std::size_t count(Verdict v) const;
  /// Pass if no row failed (and at least one row was checked).
  bool passed() const;
  /// Checked row: verdict from ok, all of predicted, measured, tolerance required.
  ReportRow& check(std::string id, Json inputs, double predicted, double measured,
                   double error_bound, double tolerance, bool ok, std::string note = {});
  ReportRow& info(std::string id, Json inputs, std::optional<double> predicted,
                  std::optional<double> measured, std::string note = {});
  /// JSON lines: header, one row per case, summary (the only timing field).
  std::string to_jsonl() const;
};

Report run_lp_scaling(const ExperimentConfig& cfg);
Report run_mixed_factorable(const ExperimentConfig& cfg);
Report run_thm31_sharpness(const ExperimentConfig& cfg);
Report run_theta_mc(const ExperimentConfig& cfg);
Report run_counterexample_projection(const ExperimentConfig& cfg);
Report run_weighted_bounds(const ExperimentConfig& cfg);
Report run_thm51(const ExperimentConfig& cfg);
Report run_compactness(const ExperimentConfig& cfg);

/// Runs one named experiment with seed cfg.seed ^ index.
Report run_experiment(const std::string& name, const ExperimentConfig& cfg);
/// Runs cfg.experiment ("all" or one name), concurrently if cfg.parallel.
std::vector<Report> run_all(const ExperimentConfig& cfg);

/// Writes <dir>/<experiment>.jsonl per report and <dir>/summary.csv.
void write_reports(const std::vector<Report>& reports, const std::string& dir);

}  // namespace gls
