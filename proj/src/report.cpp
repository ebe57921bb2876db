#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gls/error.hpp"
#include "gls/harness.hpp"

namespace gls {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "lp_scaling", "mixed_factorable", "thm31_sharpness", "theta_mc",
      "counterexample_projection", "weighted_bounds", "thm51", "compactness"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t = {
      {"lp_rel", 1e-6},        // dilation law, quadrature paths
      {"mixed_rel", 1e-6},     // tensor dilation equality
      {"sharpness_rel", 1e-3}, // sup-grid tolerance for GLS/AGLS equality cases
      {"weighted_rel", 1e-6},  // scalar weighted case
      {"anchor_rel", 1e-9},    // ball-volume anchors
      {"growth_rel", 1e-6},    // counterexample window growth
      {"quad_rel", 1e-10},     // nested quadrature target
  };
  return t;
}

const std::map<std::string, long>& default_samples() {
  static const std::map<std::string, long> s = {
      {"mc", 1'000'000}, {"matrices", 20}, {"theta_draws", 10}, {"tensors", 4}};
  return s;
}

double ExperimentConfig::tolerance(const std::string& key) const {
  const auto& defaults = default_tolerances();
  if (!defaults.count(key)) throw ConfigError("unknown tolerance: " + key);
  const auto it = tolerances.find(key);
  return it != tolerances.end() ? it->second : defaults.at(key);
}

long ExperimentConfig::sample_count(const std::string& key) const {
  const auto& defaults = default_samples();
  if (!defaults.count(key)) throw ConfigError("unknown sample count: " + key);
  const auto it = samples.find(key);
  return it != samples.end() ? it->second : defaults.at(key);
}

std::vector<MixedStructure> ExperimentConfig::structures() const {
  if (!mixed_structures.empty()) return mixed_structures;
  return {{{1, 1}, {1.0, 1.0}}, {{1, 1}, {2.0, 3.0}}, {{1, 1}, {4.0, 1.5}},
          {{1, 2}, {1.5, 4.0}}, {{2, 1}, {3.0, 1.2}}, {{1, 1, 1}, {1.0, 2.0, 5.0}}};
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["dims"] = dims;
  Json tol = Json::object();
  for (const auto& [k, v] : default_tolerances()) tol[k] = tolerance(k);
  j["tolerances"] = tol;
  Json smp = Json::object();
  for (const auto& [k, v] : default_samples()) smp[k] = sample_count(k);
  j["samples"] = smp;
  Json ms = Json::array();
  for (const MixedStructure& s : structures()) ms.push_back({{"m", s.m}, {"p", s.p}});
  j["mixed_structures"] = ms;
  return j;
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "experiment") {
        cfg.experiment = value.get<std::string>();
      } else if (key == "seed") {
        if (!value.is_number_integer()) throw ConfigError("seed must be an integer");
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "dims") {
        cfg.dims = value.get<std::vector<int>>();
        for (int d : cfg.dims)
          if (d < 1 || d > 6) throw ConfigError("dims must lie in 1..6");
      } else if (key == "tolerances") {
        for (const auto& [k, v] : value.items()) {
          if (!default_tolerances().count(k)) throw ConfigError("unknown tolerance: " + k);
          const double t = v.get<double>();
          if (!(t > 0.0)) throw ConfigError("tolerance " + k + " must be positive");
          cfg.tolerances[k] = t;
        }
      } else if (key == "samples") {
        for (const auto& [k, v] : value.items()) {
          if (!default_samples().count(k)) throw ConfigError("unknown sample count: " + k);
          const long n = v.get<long>();
          if (n < 1) throw ConfigError("sample count " + k + " must be positive");
          cfg.samples[k] = n;
        }
      } else if (key == "mixed_structures") {
        for (const auto& s : value) {
          for (const auto& [k, v] : s.items()) {
            (void)v;
            if (k != "m" && k != "p") throw ConfigError("unknown key in mixed_structures: " + k);
          }
          MixedStructure ms{s.at("m").get<std::vector<int>>(), s.at("p").get<std::vector<double>>()};
          int d = 0;
          for (int m : ms.m) d += m;
          if (ms.m.size() != ms.p.size() || ms.m.empty() || d > 3) {
            throw ConfigError("mixed_structures entries need matching m and p with sum(m) <= 3");
          }
          cfg.mixed_structures.push_back(std::move(ms));
        }
      } else if (key == "out") {
        cfg.out = value.get<std::string>();
      } else if (key == "parallel") {
        cfg.parallel = value.get<bool>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  const auto& names = experiment_names();
  if (cfg.experiment != "all" && std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
    throw ConfigError("unknown experiment: " + cfg.experiment);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return parse_config(j);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::info: return "informational";
  }
  return "?";
}

std::size_t Report::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [v](const ReportRow& r) { return r.verdict == v; }));
}

bool Report::passed() const { return count(Verdict::fail) == 0 && count(Verdict::pass) > 0; }

ReportRow& Report::check(std::string id, Json inputs, double predicted, double measured,
                         double error_bound, double tolerance, bool ok, std::string note) {
  ReportRow row;
  row.id = std::move(id);
  row.inputs = std::move(inputs);
  row.predicted = predicted;
  row.measured = measured;
  row.error_bound = error_bound;
  row.tolerance = tolerance;
  row.verdict = ok ? Verdict::pass : Verdict::fail;
  row.note = std::move(note);
  rows.push_back(std::move(row));
  return rows.back();
}

ReportRow& Report::info(std::string id, Json inputs, std::optional<double> predicted,
                        std::optional<double> measured, std::string note) {
  ReportRow row;
  row.id = std::move(id);
  row.inputs = std::move(inputs);
  row.predicted = predicted;
  row.measured = measured;
  row.verdict = Verdict::info;
  row.note = std::move(note);
  rows.push_back(std::move(row));
  return rows.back();
}

std::string Report::to_jsonl() const {
  std::ostringstream out;
  Json header;
  header["type"] = "header";
  header["experiment"] = experiment;
  header["seed"] = seed;
  header["config"] = config;
  out << header.dump() << '\n';
  for (const ReportRow& r : rows) {
    Json j;
    j["type"] = "case";
    j["case"] = r.id;
    j["inputs"] = r.inputs;
    j["predicted"] = optional_number(r.predicted);
    j["measured"] = optional_number(r.measured);
    j["error_bound"] = optional_number(r.error_bound);
    j["tolerance"] = optional_number(r.tolerance);
    j["verdict"] = to_string(r.verdict);
    if (!r.note.empty()) j["note"] = r.note;
    out << j.dump() << '\n';
  }
  Json summary;
  summary["type"] = "summary";
  summary["experiment"] = experiment;
  summary["verdict"] = passed() ? "pass" : "fail";
  summary["rows"] = rows.size();
  summary["passed"] = count(Verdict::pass);
  summary["failed"] = count(Verdict::fail);
  summary["informational"] = count(Verdict::info);
  summary["wall_clock_s"] = wall_clock_s;
  out << summary.dump() << '\n';
  return out.str();
}

void write_reports(const std::vector<Report>& reports, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  for (const Report& r : reports) {
    const std::string path = (std::filesystem::path(dir) / (r.experiment + ".jsonl")).string();
    std::ofstream out(path, std::ios::binary);
    out << r.to_jsonl();
    if (!out) throw std::runtime_error("cannot write " + path);
  }
  const std::string path = (std::filesystem::path(dir) / "summary.csv").string();
  std::ofstream csv(path, std::ios::binary);
  csv << "experiment,seed,rows,passed,failed,informational,verdict,wall_clock_s\n";
  for (const Report& r : reports) {
    csv << r.experiment << ',' << r.seed << ',' << r.rows.size() << ',' << r.count(Verdict::pass) << ','
        << r.count(Verdict::fail) << ',' << r.count(Verdict::info) << ',' << (r.passed() ? "pass" : "fail")
        << ',' << r.wall_clock_s << '\n';
  }
  if (!csv) throw std::runtime_error("cannot write " + path);
}

}  // namespace gls
