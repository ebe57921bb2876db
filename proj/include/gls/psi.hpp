#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gls/supremum.hpp"

namespace gls {

/// A weight psi(p) > 0 on an open exponent interval (a, b), 1 <= a < b <= inf.
/// Evaluation outside the closed support [a, b] gives +inf, so sup-type
/// norms ignore those exponents. Immutable after construction.
class PsiFunction {
 public:
  using Eval = std::function<double(double)>;

  PsiFunction(double lower, double upper, Eval eval, std::string label);

  double operator()(double p) const;

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  Interval support() const { return {lower_, upper_}; }
  const std::string& label() const { return label_; }

  /// c * psi, c > 0.
  PsiFunction scaled(double c) const;

 private:
  double lower_;
  double upper_;
  Eval eval_;
  std::string label_;
};

PsiFunction psi_constant(double value, double a = 1.0, double b = kInf);

/// p^(1/lambda): the weight matching the exponential Orlicz space with
/// Young function exp(|u|^lambda) - 1.
PsiFunction psi_power(double lambda, double a = 1.0, double b = kInf);

/// Arbitrary positive weight (used for test families such as p (1 + sin^2 p)).
PsiFunction psi_custom(double a, double b, PsiFunction::Eval eval, std::string label);

/// nu = psi * zeta on the intersection of the supports.
PsiFunction psi_product(const PsiFunction& psi, const PsiFunction& zeta);

/// psi = nu / zeta on the intersection of the supports. Writes a warning to
/// stderr if the quotient does not look bounded away from zero.
PsiFunction psi_quotient(const PsiFunction& nu, const PsiFunction& zeta);

/// Natural function of a sampled norm profile p -> |f|_p. Interpolates
/// ln |f|_p linearly in 1/p between samples, which reproduces delta^(1/p)
/// exactly; support is (first p, last p).
PsiFunction natural_psi(std::span<const std::pair<double, double>> samples,
                        std::string label = "natural");

/// Piecewise weight (p - a)^(-alpha) on (a, h), p^beta on (h, inf), where h
/// solves (h - a)^(-alpha) = h^beta so the pieces join continuously.
class PsiTilde {
 public:
  PsiTilde(double a, double alpha, double beta);

  double a() const { return a_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double crossover() const { return h_; }

  double operator()(double p) const;
  PsiFunction function() const;

 private:
  double a_;
  double alpha_;
  double beta_;
  double h_;
};

PsiTilde psi_tilde(double a, double alpha, double beta);

enum class Precedence { yes, no, inconclusive };

const char* to_string(Precedence v);

struct PrecedesOptions {
  double threshold = 1e-6;
  int tail = 8;
  /// psi2 must grow by at least this factor along the probe.
  double min_growth = 1e3;
};

/// Numerical verdict on psi1 << psi2 (psi1/psi2 -> 0 where psi2 -> inf)
/// along a probe sequence approaching the blow-up point of psi2.
///   yes          ratio falls below the threshold, strictly decreasing on the tail
///   no           ratio on the tail stays above the threshold and does not decay
///                (its minimum is at least a quarter of its first tail value)
///   inconclusive anything else
/// Throws DomainError if psi2 stays bounded along the probe.
Precedence precedes(const PsiFunction& psi1, const PsiFunction& psi2,
                    std::span<const double> probe, const PrecedesOptions& options = {});

/// Geometric probe 2^k, k = k_first..k_last.
std::vector<double> dyadic_probe(int k_first, int k_last);

/// Minimum of psi over an interior grid of its support.
double grid_minimum(const PsiFunction& psi, int points = 1024);

}  // namespace gls
