#include "gls/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "gls/error.hpp"

namespace gls {

namespace {

struct McRunner {
  const NestedMcProblem& problem;
  Rng& rng;
  std::vector<double> x;
  long evaluations = 0;

  double volume(const McGroup& g) const {
    double v = 1.0;
    for (int i = g.begin; i < g.end; ++i) v *= problem.hi[static_cast<std::size_t>(i)] - problem.lo[static_cast<std::size_t>(i)];
    return v;
  }

  void draw(const McGroup& g, double stratum, double strata) {
    for (int i = g.begin; i < g.end; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double lo = problem.lo[k];
      const double w = problem.hi[k] - lo;
      if (i == g.begin && strata > 0.0) {
        x[k] = lo + w * (stratum + rng.uniform()) / strata;
      } else {
        x[k] = lo + w * rng.uniform();
      }
    }
  }

  double integrand(std::size_t level) {
    const McGroup& g = problem.groups[level];
    const double v = level == 0 ? (++evaluations, problem.inner(x)) : level_value(level - 1);
    if (v <= 0.0) return 0.0;
    return g.power == 1.0 ? v : std::pow(v, g.power);
  }

  // Estimate of the level integral (inner levels: plain estimate).
  double level_value(std::size_t level) {
    const McGroup& g = problem.groups[level];
    const long n = std::max<long>(g.samples, 1);
    double sum = 0.0;
    for (long s = 0; s < n; ++s) {
      draw(g, static_cast<double>(s), g.stratified ? static_cast<double>(n) : 0.0);
      sum += integrand(level);
    }
    return volume(g) * sum / static_cast<double>(n);
  }
};

}  // namespace

McResult integrate_nested_mc(const NestedMcProblem& problem, Rng& rng) {
  if (problem.groups.empty()) throw DomainError("integrate_nested_mc: no sampled coordinates");
  if (static_cast<int>(problem.lo.size()) != problem.dim || static_cast<int>(problem.hi.size()) != problem.dim) {
    throw DomainError("integrate_nested_mc: box size mismatch");
  }
  McRunner run{problem, rng, std::vector<double>(static_cast<std::size_t>(problem.dim), 0.0)};
  const std::size_t top = problem.groups.size() - 1;
  const McGroup& g = problem.groups[top];
  const double vol = run.volume(g);
  McResult out;
  if (g.stratified) {
    const long pairs = std::max<long>(g.samples / 2, 1);
    const double strata = static_cast<double>(pairs);
    double sum = 0.0, var = 0.0;
    for (long s = 0; s < pairs; ++s) {
      run.draw(g, static_cast<double>(s), strata);
      const double v1 = run.integrand(top);
      run.draw(g, static_cast<double>(s), strata);
      const double v2 = run.integrand(top);
      sum += v1 + v2;
      var += (v1 - v2) * (v1 - v2);
    }
    const double n = 2.0 * strata;
    out.value = vol * sum / n;
    out.std_error = vol * std::sqrt(var) / n;
  } else {
    const long n = std::max<long>(g.samples, 2);
    double mean = 0.0, m2 = 0.0;
    for (long s = 0; s < n; ++s) {
      run.draw(g, 0.0, 0.0);
      const double v = run.integrand(top);
      const double delta = v - mean;
      mean += delta / static_cast<double>(s + 1);
      m2 += delta * (v - mean);
    }
    out.value = vol * mean;
    out.std_error = vol * std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  out.evaluations = run.evaluations;
  return out;
}

std::vector<long> split_budget(long total, std::size_t levels) {
  if (levels == 0) return {};
  std::vector<long> out(levels, 0);
  const long inner = std::max<long>(2, std::lround(std::pow(static_cast<double>(total), 1.0 / static_cast<double>(levels))));
  long used = 1;
  for (std::size_t i = 0; i + 1 < levels; ++i) {
    out[i] = inner;
    used *= inner;
  }
  out[levels - 1] = std::max<long>(2, total / used);
  return out;
}

}  // namespace gls
