#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gls/dilation.hpp"
#include "gls/error.hpp"
#include "gls/fundamental.hpp"
#include "gls/harness.hpp"
#include "gls/integrate.hpp"
#include "gls/spec_parse.hpp"

namespace {

void print_value(double v) { std::printf("%.17g\n", v); }

gls::Json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? gls::Json("nan") : gls::Json(v > 0 ? "inf" : "-inf");
}

gls::Backend parse_backend(const std::string& s) {
  if (s == "auto") return gls::Backend::automatic;
  if (s == "closed") return gls::Backend::closed_form;
  if (s == "quad") return gls::Backend::quadrature;
  if (s == "mc") return gls::Backend::monte_carlo;
  throw gls::ConfigError("unknown backend: " + s);
}

struct RunArgs {
  std::string experiment;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool parallel = false;
};

int cmd_run(const RunArgs& a) {
  gls::ExperimentConfig cfg = a.config.empty() ? gls::ExperimentConfig{} : gls::load_config(a.config);
  if (!a.experiment.empty()) {
    gls::Json j = {{"experiment", a.experiment}};
    cfg.experiment = gls::parse_config(j).experiment;
  }
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out.empty()) cfg.out = a.out;
  if (a.parallel) cfg.parallel = true;

  const std::vector<gls::Report> reports = gls::run_all(cfg);
  gls::write_reports(reports, cfg.out);
  bool ok = true;
  for (const gls::Report& r : reports) {
    std::printf("%-26s %-4s passed %zu failed %zu informational %zu (%.1f s)\n", r.experiment.c_str(),
                r.passed() ? "PASS" : "FAIL", r.count(gls::Verdict::pass), r.count(gls::Verdict::fail),
                r.count(gls::Verdict::info), r.wall_clock_s);
    for (const gls::ReportRow& row : r.rows) {
      if (row.verdict == gls::Verdict::fail) std::printf("  failed: %s\n", row.id.c_str());
    }
    ok = ok && r.passed();
  }
  std::printf("reports written to %s\n", cfg.out.c_str());
  return ok ? 0 : 1;
}

struct FundamentalArgs {
  std::string kind;
  double delta = 1.0;
  double p = 2.0;
  std::string pvec;
  std::string sides;
  std::string axes;
  double radius = 1.0;
  std::vector<std::string> psi;
  std::string blocks;
  double a = 1.0, alpha = 1.0, beta = 1.0;
  std::string deltas;
};

int cmd_fundamental(const FundamentalArgs& f) {
  if (f.kind == "lp") {
    print_value(gls::fundamental_lp(f.delta, f.p));
  } else if (f.kind == "gls") {
    if (f.psi.size() != 1) throw gls::ConfigError("gls: give exactly one --psi");
    print_value(gls::fundamental_gls(gls::parse_psi(f.psi[0]), f.delta));
  } else if (f.kind == "theta") {
    const gls::Vec p = gls::parse_list(f.pvec);
    if (f.axes.empty() && f.radius == 1.0) {
      print_value(gls::theta_unit(p));
    } else {
      const gls::Vec axes = f.axes.empty() ? gls::Vec(p.size(), 1.0) : gls::parse_list(f.axes);
      print_value(gls::theta_scaled(p, axes, f.radius));
    }
  } else if (f.kind == "box") {
    print_value(gls::fundamental_box(gls::parse_list(f.pvec), gls::parse_list(f.sides)));
  } else if (f.kind == "agls") {
    const std::vector<int> m = gls::parse_int_list(f.blocks);
    const gls::Vec sides = gls::parse_list(f.sides);
    if (f.psi.size() != m.size()) throw gls::ConfigError("agls: give one --psi per block");
    std::vector<gls::PsiFunction> factors;
    for (const std::string& s : f.psi) factors.push_back(gls::parse_psi(s));
    gls::ProductSet set;
    std::size_t at = 0;
    for (int mj : m) {
      if (at + static_cast<std::size_t>(mj) > sides.size()) throw gls::ConfigError("agls: too few --sides");
      set.push_back(gls::SetBlock::box(gls::Vec(sides.begin() + static_cast<long>(at),
                                                sides.begin() + static_cast<long>(at) + mj)));
      at += static_cast<std::size_t>(mj);
    }
    if (at != sides.size()) throw gls::ConfigError("agls: --sides does not match --blocks");
    print_value(gls::fundamental_agls(gls::ExponentPsi::factorable(std::move(factors)), set));
  } else if (f.kind == "tilde") {
    const gls::Vec deltas = f.deltas.empty() ? gls::Vec{1e-4, 1e-8, 1e-12, 1e4, 1e8} : gls::parse_list(f.deltas);
    std::printf("%-12s %-22s %-14s %-14s %-14s %-14s\n", "delta", "phi", "ratio_small", "ratio_small_e",
                "ratio_alpha", "ratio_a");
    auto cell = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("-"); };
    for (const gls::TildeRow& r : gls::tilde_phi_asymptotic_check(f.a, f.alpha, f.beta, deltas)) {
      std::printf("%-12g %-22.17g %-14s %-14s %-14s %-14s\n", r.delta, r.phi, cell(r.ratio_small).c_str(),
                  cell(r.ratio_small_e).c_str(), cell(r.ratio_large_alpha).c_str(), cell(r.ratio_large_a).c_str());
    }
  } else {
    throw gls::ConfigError("unknown --kind: " + f.kind);
  }
  return 0;
}

struct NormArgs {
  std::string function;
  std::string space = "lp";
  double p = 2.0;
  double alpha = 0.0;
  std::string pvec;
  std::string blocks;
  std::string psi;
  std::string matrix;
  std::string backend = "auto";
  std::string weight = "euclidean";
  long samples = 1'000'000;
  std::uint64_t seed = 1;
};

int cmd_norm(const NormArgs& n) {
  gls::TestFunction f = gls::parse_function(n.function);
  if (!n.matrix.empty()) f = gls::apply(gls::make_dilation(gls::parse_matrix(n.matrix)), f);
  gls::NormOptions o;
  o.backend = parse_backend(n.backend);
  o.mc_samples = n.samples;
  o.seed = n.seed;
  if (n.weight == "max") {
    o.weight = gls::WeightNorm::max;
  } else if (n.weight != "euclidean") {
    throw gls::ConfigError("unknown --weight: " + n.weight);
  }

  gls::NormEstimate e;
  if (n.space == "lp") {
    e = gls::lp_norm(f, n.p, o);
  } else if (n.space == "weighted") {
    e = gls::weighted_norm(f, n.p, n.alpha, o);
  } else if (n.space == "mixed") {
    const gls::Vec p = gls::parse_list(n.pvec);
    const std::vector<int> m =
        n.blocks.empty() ? std::vector<int>(p.size(), 1) : gls::parse_int_list(n.blocks);
    e = gls::mixed_norm(f, gls::MixedExponent(p, m), o);
  } else if (n.space == "gls") {
    if (n.psi.empty()) throw gls::ConfigError("gls: --psi is required");
    e = gls::gls_norm(f, gls::parse_psi(n.psi), o);
  } else {
    throw gls::ConfigError("unknown --space: " + n.space);
  }
  const gls::Json out = {{"function", f.label()},  {"space", n.space},
                         {"value", number(e.value)}, {"abs_error", number(e.abs_error)},
                         {"method", gls::to_string(e.method)}, {"count", e.count}};
  std::cout << out.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grand Lebesgue space dilation toolkit"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "run verification experiments and write reports");
  run_cmd->add_option("--experiment", run.experiment, "experiment name or 'all'");
  run_cmd->add_option("--config", run.config, "JSON config file");
  run_cmd->add_option("--seed", run.seed, "base seed");
  run_cmd->add_option("--out", run.out, "report directory");
  run_cmd->add_flag("--parallel", run.parallel, "run experiments concurrently");

  FundamentalArgs fa;
  CLI::App* fund_cmd = app.add_subcommand("fundamental", "fundamental function values");
  fund_cmd->add_option("--kind", fa.kind, "lp|gls|theta|box|agls|tilde")
      ->required()
      ->check(CLI::IsMember({"lp", "gls", "theta", "box", "agls", "tilde"}));
  fund_cmd->add_option("--delta", fa.delta, "set measure");
  fund_cmd->add_option("-p,--p", fa.p, "exponent (lp)");
  fund_cmd->add_option("--pvec", fa.pvec, "exponent vector, comma separated");
  fund_cmd->add_option("--sides", fa.sides, "box sides, comma separated");
  fund_cmd->add_option("--axes", fa.axes, "ellipsoid semi-axes");
  fund_cmd->add_option("--radius", fa.radius, "ellipsoid radius");
  fund_cmd->add_option("--psi", fa.psi, "weight spec (repeat per block for agls)");
  fund_cmd->add_option("--blocks", fa.blocks, "block dimensions for agls");
  fund_cmd->add_option("--a", fa.a, "tilde: left end");
  fund_cmd->add_option("--alpha", fa.alpha, "tilde: blow-up order");
  fund_cmd->add_option("--beta", fa.beta, "tilde: growth order");
  fund_cmd->add_option("--deltas", fa.deltas, "tilde: measures, comma separated");

  NormArgs na;
  CLI::App* norm_cmd = app.add_subcommand("norm", "norm of a test function");
  norm_cmd->add_option("--function", na.function, "function spec")->required();
  norm_cmd->add_option("--space", na.space, "lp|weighted|mixed|gls")
      ->check(CLI::IsMember({"lp", "weighted", "mixed", "gls"}));
  norm_cmd->add_option("-p,--p", na.p, "exponent");
  norm_cmd->add_option("--alpha", na.alpha, "weight exponent");
  norm_cmd->add_option("--pvec", na.pvec, "per-block exponents");
  norm_cmd->add_option("--blocks", na.blocks, "block dimensions (default all 1)");
  norm_cmd->add_option("--psi", na.psi, "weight spec for gls");
  norm_cmd->add_option("--matrix", na.matrix, "apply the dilation x -> f(Ax), rows separated by ';'");
  norm_cmd->add_option("--backend", na.backend, "auto|closed|quad|mc")
      ->check(CLI::IsMember({"auto", "closed", "quad", "mc"}));
  norm_cmd->add_option("--weight", na.weight, "euclidean|max");
  norm_cmd->add_option("--samples", na.samples, "Monte Carlo samples");
  norm_cmd->add_option("--seed", na.seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*fund_cmd) return cmd_fundamental(fa);
    if (*norm_cmd) return cmd_norm(na);
  } catch (const gls::ConfigError& e) {
    std::fprintf(stderr, "glstool: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "glstool: %s\n", e.what());
    return 3;
  }
  return 0;
}
