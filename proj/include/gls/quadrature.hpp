#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gls {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int min_level = 2;
  int max_level = 9;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
};

/// Tanh-sinh (double exponential) quadrature on a finite [a, b]. Algebraic
/// endpoint singularities and kinks at the endpoints keep the fast
/// convergence, so callers split at interior breakpoints. Nodes that round
/// onto an endpoint are moved to the nearest interior double.
QuadResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& options = {});

/// Iterated integral over R^d, innermost coordinate x_0 first:
///   I_0(x_>0) = int leaf(x) dx_0
///   I_k(x_>k) = int I_{k-1}^(power[k-1]) dx_k
/// The slice callback reports the support interval of x_k (given the
/// already fixed coordinates x_>k) and interior breakpoints where the level
/// integrand is not smooth; it returns false for an empty slice.
struct NestedProblem {
  int dim = 0;
  std::function<double(std::span<const double>)> leaf;
  std::vector<double> power;
  std::function<bool(int k, std::span<const double> x, double& lo, double& hi,
                     std::vector<double>& breaks)>
      slice;
  /// Optional exact innermost integral of leaf over x_0 in [lo, hi] (x_>0
  /// fixed). When set, only the outer levels are integrated numerically.
  std::function<double(double lo, double hi, std::span<const double> x)> level0;
};

QuadResult integrate_nested(const NestedProblem& problem, const QuadOptions& options = {});

}  // namespace gls
