#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "gls/linalg.hpp"

namespace gls {

/// The one seedable generator used for all sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Coordinates [begin, end) sampled jointly at one level of a nested
/// integral. The level integrand is the estimate from the level below raised
/// to `power`.
struct McGroup {
  int begin = 0;
  int end = 0;
  double power = 1.0;
  long samples = 0;
  /// Stratify along the first coordinate of the group. At the outermost
  /// level strata hold two samples each so the variance stays estimable.
  bool stratified = false;
};

struct NestedMcProblem {
  int dim = 0;
  /// Integrand of the innermost sampled level, called with every coordinate
  /// from groups[0].begin upward filled in. Coordinates below that are
  /// handled analytically by the callback itself.
  std::function<double(std::span<const double>)> inner;
  std::vector<McGroup> groups;  // innermost first
  Vec lo;
  Vec hi;
};

struct McResult {
  double value = 0.0;
  double std_error = 0.0;
  long evaluations = 0;
};

McResult integrate_nested_mc(const NestedMcProblem& problem, Rng& rng);

/// Splits a total sample budget over nested levels: inner levels get
/// n^(1/levels) each (at least 2), the outermost level the rest.
std::vector<long> split_budget(long total, std::size_t levels);

}  // namespace gls
