#pragma once

#include <cstdint>
#include <vector>

#include "gls/fundamental.hpp"
#include "gls/psi.hpp"
#include "gls/quadrature.hpp"
#include "gls/supremum.hpp"
#include "gls/test_function.hpp"

namespace gls {

enum class Method { closed_form, quadrature, monte_carlo };
const char* to_string(Method m);

/// closed form > nested quadrature (d <= 3) > Monte Carlo, unless forced.
enum class Backend { automatic, closed_form, quadrature, monte_carlo };

struct NormEstimate {
  double value = 0.0;
  /// Two-sided bound for integrals (3 sigma for Monte Carlo); for sup-type
  /// norms the error of the integral at the maximiser.
  double abs_error = 0.0;
  Method method = Method::closed_form;
  /// Quadrature nodes, Monte Carlo samples, or sup objective evaluations.
  long count = 0;
  /// Sup-type norms: the value is attained by a tested exponent (or a
  /// boundary limit), so it bounds the true supremum from below.
  bool lower_bound = false;
};

struct NormOptions {
  Backend backend = Backend::automatic;
  QuadOptions quad;
  long mc_samples = 1'000'000;
  std::uint64_t seed = 1;
  WeightNorm weight = WeightNorm::euclidean;
  SupOptions sup;
  int agls_nodes = 64;
};

NormEstimate lp_norm(const TestFunction& f, double p, const NormOptions& options = {});

/// (int |f|^p |x|^alpha dx)^(1/p); |x| Euclidean or max-norm per options.
NormEstimate weighted_norm(const TestFunction& f, double p, double alpha,
                           const NormOptions& options = {});

/// Iterated norm: x_1 (block 1) innermost at exponent p_1, outward.
NormEstimate mixed_norm(const TestFunction& f, const MixedExponent& pm,
                        const NormOptions& options = {});

/// sup over p in the support of psi (cut to the integrability range of f)
/// of |f|_p / psi(p).
NormEstimate gls_norm(const TestFunction& f, const PsiFunction& psi,
                      const NormOptions& options = {});

/// sup over the interior of psi's exponent domain of |f|_p / psi(p), with p
/// one exponent per block of block_dims.
NormEstimate agls_norm(const TestFunction& f, const ExponentPsi& psi,
                       const std::vector<int>& block_dims, const NormOptions& options = {});

/// Monte Carlo mixed norm of a region indicator: the innermost coordinate
/// is integrated exactly (chord length), the rest sampled in the bounding
/// box. abs_error is 3 standard errors.
NormEstimate mc_region_norm(const Ellipsoid& region, const MixedExponent& pm, long n,
                            std::uint64_t seed);
NormEstimate mc_region_norm(const Parallelepiped& region, const MixedExponent& pm, long n,
                            std::uint64_t seed);

/// Natural function p -> |f|_p on [a, b], sampled at n exponents evenly
/// spaced in 1/p.
PsiFunction natural_psi_of(const TestFunction& f, double a, double b, int n = 65,
                           const NormOptions& options = {});

/// Factorable natural weight: one natural function per block factor of f.
ExponentPsi natural_exponent_psi(const TestFunction& f, const std::vector<int>& block_dims,
                                 const std::vector<Interval>& domain, int n = 65,
                                 const NormOptions& options = {});

}  // namespace gls
