#include "gls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gls/error.hpp"
#include "gls/supremum.hpp"

namespace gls {

namespace {

constexpr double kTMax = 6.0;
constexpr int kTableLevels = 12;

struct Node {
  double t;
  double dist;    // 1 - tanh(u): distance of the node from the endpoint on [-1, 1]
  double weight;  // d/dt tanh(pi/2 sinh t)
};

// nodes[level]: the nodes first used at that level (level 0: t = 0..tmax step 1;
// level k: odd multiples of 2^-k).
struct NodeTable {
  std::vector<std::vector<Node>> levels;

  NodeTable() {
    levels.resize(kTableLevels);
    const auto make = [](double t) {
      const double u = 0.5 * std::numbers::pi * std::sinh(t);
      const double ch = std::cosh(u);
      return Node{t, std::exp(-u) / ch, 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch)};
    };
    for (int j = 0; j <= static_cast<int>(kTMax); ++j) levels[0].push_back(make(j));
    for (int k = 1; k < kTableLevels; ++k) {
      const double h = std::ldexp(1.0, -k);
      for (int j = 1; h * j <= kTMax; j += 2) levels[static_cast<std::size_t>(k)].push_back(make(h * j));
    }
  }
};

const NodeTable& table() {
  static const NodeTable t;
  return t;
}

}  // namespace

QuadResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options) {
  QuadResult out;
  if (!(a < b)) return out;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto& tab = table();
  // Nodes closer to an endpoint than one ulp are moved to the nearest
  // interior double rather than dropped, so every level sums the same nodes.
  const double a_in = std::nextafter(a, b);
  const double b_in = std::nextafter(b, a);
  if (!(a_in < b_in)) {
    out.value = (b - a) * f(mid);
    out.evaluations = 1;
    return out;
  }
  const auto inside_left = [&](double dist) { return std::clamp(a + half * dist, a_in, b_in); };
  const auto inside_right = [&](double dist) { return std::clamp(b - half * dist, a_in, b_in); };
  const int max_level = std::min(options.max_level, kTableLevels - 1);

  // Sum of w * (f(left) + f(right)) over nodes beyond the cutoff contributes
  // nothing measurable once terms have decayed; the cutoff is taken from level 0.
  double t_cut = kTMax;
  double sum = 0.0;
  {
    const double fm = f(mid);
    ++out.evaluations;
    sum = tab.levels[0][0].weight * fm;
    double peak = std::abs(sum);
    for (std::size_t j = 1; j < tab.levels[0].size(); ++j) {
      const Node& n = tab.levels[0][j];
      double term = f(inside_left(n.dist)) + f(inside_right(n.dist));
      out.evaluations += 2;
      term *= n.weight;
      sum += term;
      peak = std::max(peak, std::abs(term));
      if (j >= 3 && std::abs(term) <= 1e-18 * peak) {
        t_cut = n.t;
        break;
      }
    }
  }
  double estimate = half * sum;  // h = 1
  double previous = estimate;
  double prev_diff = kInf;
  for (int level = 1; level <= max_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    double add = 0.0;
    for (const Node& n : tab.levels[static_cast<std::size_t>(level)]) {
      if (n.t > t_cut) break;
      out.evaluations += 2;
      add += n.weight * (f(inside_left(n.dist)) + f(inside_right(n.dist)));
    }
    sum += add;
    previous = estimate;
    estimate = half * h * sum;
    // Convergence is quadratic in the level, so the error left after this
    // level is about diff^2 / previous diff.
    // The reported error is the plain last difference, which bounds it with margin.
    const double diff = std::abs(estimate - previous);
    const double predicted = level >= 2 && prev_diff > diff ? diff * diff / prev_diff : diff;
    out.abs_error = diff;
    prev_diff = diff;
    if (level >= options.min_level && (predicted <= options.rel_tol * std::abs(estimate) ||
                                       predicted <= options.abs_tol)) {
      break;
    }
  }
  out.value = estimate;
  return out;
}

namespace {

struct NestedRunner {
  const NestedProblem& problem;
  const QuadOptions& options;
  std::vector<double> x;
  long evaluations = 0;

  // Integrates level k with x_>k fixed. rel_err receives the relative error
  // estimate of the returned value (quadrature plus propagated inner error).
  double level(int k, double& rel_err) {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> breaks;
    rel_err = 0.0;
    if (!problem.slice(k, x, lo, hi, breaks) || !(lo < hi)) return 0.0;

    if (k == 0 && problem.level0) {
      ++evaluations;
      return problem.level0(lo, hi, x);
    }

    std::vector<double> cuts{lo};
    std::sort(breaks.begin(), breaks.end());
    const double tol = 1e-12 * (hi - lo);
    for (double b : breaks)
      if (b > lo + tol && b < hi - tol && b > cuts.back() + tol) cuts.push_back(b);
    cuts.push_back(hi);

    // Inner errors enter as a magnitude-weighted mean of their relative
    // errors; slices near the support boundary are tiny and often have a
    // large relative error that does not matter.
    double sum_g = 0.0;
    double sum_g_rel = 0.0;
    const double power = k == 0 ? 1.0 : problem.power[static_cast<std::size_t>(k - 1)];
    std::function<double(double)> integrand;
    if (k == 0) {
      integrand = [&](double t) {
        x[0] = t;
        ++evaluations;
        return problem.leaf(x);
      };
    } else {
      integrand = [&, power](double t) {
        x[static_cast<std::size_t>(k)] = t;
        double r = 0.0;
        const double v = level(k - 1, r);
        if (v <= 0.0) return 0.0;
        const double g = power == 1.0 ? v : std::pow(v, power);
        sum_g += g;
        sum_g_rel += g * r;
        return g;
      };
    }

    // Outer levels cannot resolve differences below the inner noise.
    QuadOptions opts = options;
    if (k > 0) opts.rel_tol = std::max(options.rel_tol, 4.0 * options.rel_tol * k);
    double total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const QuadResult q = tanh_sinh(integrand, cuts[i], cuts[i + 1], opts);
      total += q.value;
      err += q.abs_error;
    }
    const double inner_rel = sum_g > 0.0 ? sum_g_rel / sum_g : 0.0;
    rel_err = (total != 0.0 ? err / std::abs(total) : 0.0) + power * inner_rel;
    return total;
  }
};

}  // namespace

QuadResult integrate_nested(const NestedProblem& problem, const QuadOptions& options) {
  if (problem.dim < 1) throw DomainError("integrate_nested: dimension must be >= 1");
  if (static_cast<int>(problem.power.size()) != problem.dim - 1) {
    throw DomainError("integrate_nested: need one power per outer level");
  }
  NestedRunner runner{problem, options, std::vector<double>(static_cast<std::size_t>(problem.dim), 0.0)};
  double rel = 0.0;
  QuadResult out;
  out.value = runner.level(problem.dim - 1, rel);
  out.abs_error = std::abs(out.value) * rel;
  out.evaluations = runner.evaluations;
  return out;
}

}  // namespace gls
