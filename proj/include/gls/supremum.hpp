#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace gls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tuning of the supremum search over an open exponent interval.
struct SupOptions {
  int grid_points = 512;
  double golden_tol = 1e-10;
  /// Offsets (relative to the interval scale) used to approach each open end.
  std::vector<double> boundary_offsets = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
};

struct SupResult {
  enum class Where { interior, lower_limit, upper_limit };

  double value = 0.0;
  double argmax = 0.0;
  Where where = Where::interior;
  bool unbounded = false;
  int evaluations = 0;
};

/// Nodes strictly inside (lo, hi). Finite intervals use a logistic map that
/// clusters nodes at both ends; hi = +inf uses nodes geometric in p - lo.
std::vector<double> open_interval_grid(double lo, double hi, int n);

/// sup of objective over the open interval (lo, hi). Coarse grid scan, then
/// golden-section refinement around the best node, then the limits at both
/// ends (approached geometrically and Richardson-extrapolated). The result
/// is the largest of these. Objective values of +inf mark the sup unbounded.
SupResult supremum(const std::function<double(double)>& objective, double lo, double hi,
                   const SupOptions& options = {});

struct Interval {
  double lo = 1.0;
  double hi = kInf;
};

struct MultiSupResult {
  double value = 0.0;
  std::vector<double> argmax;
  bool unbounded = false;
  int evaluations = 0;
};

/// sup over the interior of a box of exponent intervals (l <= 3): per-axis
/// grid (including near-boundary nodes), then coordinate-wise golden-section
/// sweeps from the best node.
MultiSupResult supremum_box(const std::function<double(std::span<const double>)>& objective,
                            std::span<const Interval> box, int nodes_per_axis = 64,
                            double golden_tol = 1e-10);

}  // namespace gls
