#include "gls/dilation.hpp"

#include <cmath>
#include <limits>

#include "gls/error.hpp"

namespace gls {

Dilation::Dilation(Matrix a) : a_(std::move(a)) {
  if (!a_.is_square() || a_.rows() == 0) throw DomainError("Dilation: matrix must be square");
  double scale = 1.0;
  for (std::size_t i = 0; i < a_.rows(); ++i) scale *= euclidean_norm(a_.row(i));
  const LuDecomposition lu = lu_decompose(a_);
  det_ = lu.singular ? 0.0 : lu.determinant();
  if (!(std::abs(det_) > 1e-12 * scale)) {
    throw SingularMatrixError(
        "Dilation: matrix is singular (det A = 0); V_A does not map L_p into L_p without det A != 0");
  }
  inv_ = lu.inverse();
  op_norm_ = spectral_norm(a_);
  inv_op_norm_ = spectral_norm(inv_);
}

Dilation make_dilation(const Matrix& a) { return Dilation(a); }

TensorDilation::TensorDilation(std::vector<Dilation> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DomainError("TensorDilation: no blocks");
}

std::vector<int> TensorDilation::block_dims() const {
  std::vector<int> out;
  for (const Dilation& b : blocks_) out.push_back(b.dim());
  return out;
}

int TensorDilation::dim() const {
  int d = 0;
  for (const Dilation& b : blocks_) d += b.dim();
  return d;
}

Matrix TensorDilation::full_matrix() const {
  std::vector<Matrix> m;
  for (const Dilation& b : blocks_) m.push_back(b.matrix());
  return block_diagonal(m);
}

TestFunction apply(const Dilation& v, const TestFunction& f) {
  if (v.dim() != f.dim()) throw DomainError("apply: dilation and function dimensions differ");
  return f.composed(v.matrix());
}

TestFunction apply(const TensorDilation& t, const TestFunction& f) {
  if (t.dim() != f.dim()) throw DomainError("apply: tensor dilation and function dimensions differ");
  return f.composed(t.full_matrix(), "T");
}

double predicted_lp_ratio(const Dilation& v, double p) {
  return std::pow(std::abs(v.det()), -1.0 / p);
}

WeightedBound predicted_weighted_bound(const Dilation& v, double p, double alpha, WeightNorm norm) {
  double a_norm = v.op_norm();
  double inv_norm = v.inv_op_norm();
  if (norm == WeightNorm::max) {
    a_norm = max_row_sum_norm(v.matrix());
    inv_norm = max_row_sum_norm(v.inverse());
  }
  const double base = predicted_lp_ratio(v, p);
  return {base * std::pow(inv_norm, alpha / p), base * std::pow(a_norm, -alpha / p)};
}

double printed_diagonal_value(const Dilation& v, double p, double alpha) {
  return std::pow(std::abs(v.det()), -(1.0 + alpha) / p);
}

double printed_scalar_value(double lambda, int d, double p, double alpha) {
  return std::pow(std::abs(lambda), -d * (1.0 + alpha) / p);
}

double diagonal_weighted_sup(const Dilation& v, double p, double alpha) {
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.dim(); ++i) {
    for (int j = 0; j < v.dim(); ++j) {
      if (i != j && v.matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) != 0.0) {
        throw DomainError("diagonal_weighted_sup: matrix is not diagonal");
      }
    }
    smallest = std::min(smallest, std::abs(v.matrix()(static_cast<std::size_t>(i), static_cast<std::size_t>(i))));
  }
  return predicted_lp_ratio(v, p) * std::pow(smallest, -alpha / p);
}

double lambda_tensor(const TensorDilation& t, const MixedExponent& pm) {
  if (pm.blocks() != t.blocks().size() || pm.m() != t.block_dims()) {
    throw DomainError("lambda_tensor: exponent blocks do not match the dilation blocks");
  }
  double log_value = 0.0;
  for (std::size_t j = 0; j < pm.blocks(); ++j) {
    log_value -= std::log(std::abs(t.blocks()[j].det())) / pm.p()[j];
  }
  return std::exp(log_value);
}

double gls_dilation_bound(const Dilation& v, const PsiFunction& zeta, const SupOptions& options) {
  return fundamental_gls(zeta, 1.0 / std::abs(v.det()), options);
}

WeightedBound weighted_gls_bound(const Dilation& v, const PsiFunction& zeta, double alpha,
                                 const SupOptions& options) {
  const double inv_det = 1.0 / std::abs(v.det());
  return {fundamental_gls(zeta, inv_det * std::pow(v.inv_op_norm(), alpha), options),
          fundamental_gls(zeta, inv_det * std::pow(v.op_norm(), -alpha), options)};
}

ProductSet k_cube(const TensorDilation& t) {
  ProductSet set;
  for (const Dilation& b : t.blocks()) {
    set.push_back(SetBlock::cube(b.dim(), std::pow(std::abs(b.det()), -1.0 / b.dim())));
  }
  return set;
}

double agls_dilation_bound(const TensorDilation& t, const ExponentPsi& zeta, const AglsOptions& options) {
  return fundamental_agls(zeta, k_cube(t), options);
}

}  // namespace gls
