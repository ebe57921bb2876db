#pragma once

#include <vector>

#include "gls/fundamental.hpp"
#include "gls/linalg.hpp"
#include "gls/psi.hpp"
#include "gls/test_function.hpp"

namespace gls {

/// V_A f(x) = f(A x) for a nonsingular square A, with cached determinant,
/// inverse and spectral norms.
class Dilation {
 public:
  /// Throws SingularMatrixError when |det A| <= 1e-12 * prod of row norms.
  explicit Dilation(Matrix a);

  const Matrix& matrix() const { return a_; }
  const Matrix& inverse() const { return inv_; }
  double det() const { return det_; }
  double op_norm() const { return op_norm_; }
  double inv_op_norm() const { return inv_op_norm_; }
  int dim() const { return static_cast<int>(a_.rows()); }

 private:
  Matrix a_;
  Matrix inv_;
  double det_ = 0.0;
  double op_norm_ = 0.0;
  double inv_op_norm_ = 0.0;
};

Dilation make_dilation(const Matrix& a);

/// Block-wise dilation: A_j acts on the j-th consecutive coordinate block.
class TensorDilation {
 public:
  explicit TensorDilation(std::vector<Dilation> blocks);
  const std::vector<Dilation>& blocks() const { return blocks_; }
  std::vector<int> block_dims() const;
  int dim() const;
  Matrix full_matrix() const;

 private:
  std::vector<Dilation> blocks_;
};

TestFunction apply(const Dilation& v, const TestFunction& f);
TestFunction apply(const TensorDilation& t, const TestFunction& f);

/// |det A|^(-1/p): |V_A f|_p / |f|_p for every f.
double predicted_lp_ratio(const Dilation& v, double p);

struct WeightedBound {
  /// |det A|^(-1/p) ||A^-1||^(alpha/p), what the change of variables gives.
  double derivation = 0.0;
  /// |det A|^(-1/p) ||A||^(-alpha/p), the printed form.
  double printed = 0.0;
};

/// Operator norms are spectral for the Euclidean weight, induced max-norm
/// (max row sum) for the max-norm weight.
WeightedBound predicted_weighted_bound(const Dilation& v, double p, double alpha,
                                       WeightNorm norm = WeightNorm::euclidean);

/// Printed diagonal formula |det A|^(-(1 + alpha)/p).
double printed_diagonal_value(const Dilation& v, double p, double alpha);
/// Scalar-matrix formula as printed, |lambda|^(-d (1 + alpha)/p).
double printed_scalar_value(double lambda, int d, double p, double alpha);

/// Operator norm of V_A on the weighted space for diagonal A:
/// |det A|^(-1/p) (min_k |a_kk|)^(-alpha/p), approached by functions
/// concentrating along the axis of the smallest entry.
double diagonal_weighted_sup(const Dilation& v, double p, double alpha);

/// prod_j |det A_j|^(-1/p_j).
double lambda_tensor(const TensorDilation& t, const MixedExponent& pm);

/// phi(G zeta, |det A|^-1).
double gls_dilation_bound(const Dilation& v, const PsiFunction& zeta, const SupOptions& options = {});

/// phi(G zeta, .) at |det A|^-1 ||A||^-alpha (printed) and at
/// |det A|^-1 ||A^-1||^alpha (derivation).
WeightedBound weighted_gls_bound(const Dilation& v, const PsiFunction& zeta, double alpha,
                                 const SupOptions& options = {});

/// Product of cubes, block j of side |det A_j|^(-1/m_j).
ProductSet k_cube(const TensorDilation& t);

/// phi(AGLS zeta, K) = sup_p Lambda_p(A) / zeta(p).
double agls_dilation_bound(const TensorDilation& t, const ExponentPsi& zeta,
                           const AglsOptions& options = {});

}  // namespace gls
