#include "gls/supremum.hpp"

#include <algorithm>
#include <cmath>

#include "gls/error.hpp"

namespace gls {

namespace {

double interval_scale(double lo, double hi) {
  return std::isfinite(hi) ? hi - lo : std::max(1.0, lo);
}

// Point at relative offset eps from the lower end (or upper end).
double near_lower(double lo, double hi, double eps) { return lo + eps * interval_scale(lo, hi); }

double near_upper(double lo, double hi, double eps) {
  if (std::isfinite(hi)) return hi - eps * (hi - lo);
  return std::max(1.0, lo) / eps;
}

constexpr double kGoldenRatio = 0.6180339887498949;

// Maximize f on [a, b]; returns the best point seen.
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b,
                                     double tol, int& evals) {
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = f(c);
  double fd = f(d);
  evals += 2;
  while (b - a > tol * (1.0 + std::abs(c))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = f(d);
    }
    ++evals;
    if (evals > 100000) break;
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct BoundaryLimit {
  double value = 0.0;
  double at = 0.0;
  bool diverges = false;
};

// Follow the objective toward one end of the interval and estimate the
// limit. A sequence that keeps increasing without its increments shrinking
// is reported as divergent.
BoundaryLimit boundary_limit(const std::function<double(double)>& f,
                             const std::function<double(double)>& point,
                             const std::vector<double>& offsets, int& evals) {
  std::vector<double> vals;
  vals.reserve(offsets.size());
  for (double eps : offsets) {
    vals.push_back(f(point(eps)));
    ++evals;
  }
  BoundaryLimit out;
  out.at = point(offsets.back());
  const std::size_t n = vals.size();
  for (double v : vals) {
    if (std::isinf(v) && v > 0) {
      out.diverges = true;
      out.value = kInf;
      return out;
    }
  }
  out.value = vals.back();
  if (n < 3) return out;
  bool increasing = true;
  for (std::size_t i = 1; i < n; ++i) increasing = increasing && vals[i] > vals[i - 1];
  const double d_last = vals[n - 1] - vals[n - 2];
  const double d_prev = vals[n - 2] - vals[n - 3];
  if (increasing && d_prev > 0.0 && d_last >= 0.5 * d_prev) {
    out.diverges = true;
    out.value = kInf;
    return out;
  }
  // Richardson step for offsets shrinking tenfold and a limit approached
  // linearly in the offset; only applied when the increments confirm it.
  if (d_prev != 0.0) {
    const double ratio = d_last / d_prev;
    if (ratio > 0.05 && ratio < 0.2) out.value = vals.back() + d_last / 9.0;
  }
  return out;
}

}  // namespace

std::vector<double> open_interval_grid(double lo, double hi, int n) {
  if (!(lo < hi) || n < 1) throw DomainError("open_interval_grid: empty interval");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  if (std::isfinite(hi)) {
    // Logistic map of a uniform grid on [-S, S]: dense at both ends.
    const double s_max = std::log(1e4);
    for (int i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : -s_max + 2.0 * s_max * i / (n - 1);
      const double t = 1.0 / (1.0 + std::exp(-s));
      grid.push_back(lo + (hi - lo) * t);
    }
  } else {
    const double scale = std::max(1.0, lo);
    const double e0 = std::log(1e-4);
    const double e1 = std::log(1e4);
    for (int i = 0; i < n; ++i) {
      const double s = n == 1 ? 0.0 : e0 + (e1 - e0) * i / (n - 1);
      grid.push_back(lo + scale * std::exp(s));
    }
  }
  return grid;
}

SupResult supremum(const std::function<double(double)>& objective, double lo, double hi,
                   const SupOptions& options) {
  if (!(lo < hi)) throw DomainError("supremum: empty interval");
  SupResult out;
  const std::vector<double> grid = open_interval_grid(lo, hi, options.grid_points);
  std::vector<double> vals(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = objective(grid[i]);
    ++out.evaluations;
    if (std::isinf(vals[i]) && vals[i] > 0) {
      out.value = kInf;
      out.argmax = grid[i];
      out.unbounded = true;
      return out;
    }
    if (vals[i] > vals[best] || std::isnan(vals[best])) best = i;
  }
  out.value = vals[best];
  out.argmax = grid[best];

  const double a = best == 0 ? near_lower(lo, hi, options.boundary_offsets.back()) : grid[best - 1];
  const double b = best + 1 == grid.size() ? (std::isfinite(hi) ? near_upper(lo, hi, options.boundary_offsets.back())
                                                                : grid[best] * 2.0)
                                           : grid[best + 1];
  if (a < b) {
    const auto [x, fx] = golden_max(objective, a, b, options.golden_tol, out.evaluations);
    if (fx > out.value) {
      out.value = fx;
      out.argmax = x;
    }
  }

  const auto lower = boundary_limit(
      objective, [&](double e) { return near_lower(lo, hi, e); }, options.boundary_offsets,
      out.evaluations);
  const auto upper = boundary_limit(
      objective, [&](double e) { return near_upper(lo, hi, e); }, options.boundary_offsets,
      out.evaluations);
  if (lower.diverges || upper.diverges) {
    out.value = kInf;
    out.unbounded = true;
    out.where = lower.diverges ? SupResult::Where::lower_limit : SupResult::Where::upper_limit;
    out.argmax = lower.diverges ? lo : hi;
    return out;
  }
  if (lower.value > out.value) {
    out.value = lower.value;
    out.argmax = lo;
    out.where = SupResult::Where::lower_limit;
  }
  if (upper.value > out.value) {
    out.value = upper.value;
    out.argmax = hi;
    out.where = SupResult::Where::upper_limit;
  }
  return out;
}

MultiSupResult supremum_box(const std::function<double(std::span<const double>)>& objective,
                            std::span<const Interval> box, int nodes_per_axis, double golden_tol) {
  const std::size_t l = box.size();
  if (l == 0 || l > 3) throw UnsupportedError("supremum_box: 1 to 3 exponent coordinates supported");
  std::vector<std::vector<double>> axes(l);
  for (std::size_t j = 0; j < l; ++j) {
    const Interval iv = box[j];
    if (!(iv.lo < iv.hi)) throw DomainError("supremum_box: empty exponent interval");
    axes[j] = open_interval_grid(iv.lo, iv.hi, nodes_per_axis);
    for (double eps : {1e-6, 1e-9}) {
      axes[j].push_back(near_lower(iv.lo, iv.hi, eps));
      axes[j].push_back(near_upper(iv.lo, iv.hi, eps));
    }
    std::sort(axes[j].begin(), axes[j].end());
  }

  MultiSupResult out;
  std::vector<double> p(l);
  std::vector<std::size_t> idx(l, 0), best_idx(l, 0);
  double best = -kInf;
  while (true) {
    for (std::size_t j = 0; j < l; ++j) p[j] = axes[j][idx[j]];
    const double v = objective(p);
    ++out.evaluations;
    if (std::isinf(v) && v > 0) {
      out.value = kInf;
      out.unbounded = true;
      out.argmax = p;
      return out;
    }
    if (v > best) {
      best = v;
      best_idx = idx;
    }
    std::size_t j = 0;
    while (j < l && ++idx[j] == axes[j].size()) idx[j++] = 0;
    if (j == l) break;
  }

  std::vector<double> x(l);
  for (std::size_t j = 0; j < l; ++j) x[j] = axes[j][best_idx[j]];
  for (int sweep = 0; sweep < 20; ++sweep) {
    const double before = best;
    for (std::size_t j = 0; j < l; ++j) {
      const auto& ax = axes[j];
      const auto it = std::lower_bound(ax.begin(), ax.end(), x[j]);
      const std::size_t k = static_cast<std::size_t>(it - ax.begin());
      const double a = k == 0 ? ax.front() : ax[k - 1];
      const double b = k + 1 >= ax.size() ? ax.back() : ax[k + 1];
      if (!(a < b)) continue;
      std::vector<double> trial = x;
      const auto line = [&](double t) {
        trial[j] = t;
        return objective(trial);
      };
      const auto [t, ft] = golden_max(line, a, b, golden_tol, out.evaluations);
      if (ft > best) {
        best = ft;
        x[j] = t;
      }
    }
    if (best - before <= 1e-13 * std::abs(best)) break;
  }
  out.value = best;
  out.argmax = x;
  return out;
}

}  // namespace gls
