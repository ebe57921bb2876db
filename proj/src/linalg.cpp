#include "gls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gls/error.hpp"

namespace gls {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DomainError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) { return scalar(n, 1.0); }

Matrix Matrix::scalar(std::size_t n, double lambda) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = lambda;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw DomainError("Matrix: dimension mismatch in product");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Vec Matrix::operator*(std::span<const double> x) const {
  if (cols_ != x.size()) throw DomainError("Matrix: dimension mismatch in matvec");
  Vec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

Matrix Matrix::operator*(double s) const {
  Matrix out = *this;
  for (double& v : out.data_) v *= s;
  return out;
}

Matrix Matrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

LuDecomposition lu_decompose(const Matrix& a) {
  if (!a.is_square()) throw DomainError("lu_decompose: matrix must be square");
  const std::size_t n = a.rows();
  LuDecomposition out{a, std::vector<std::size_t>(n), 1, false};
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  Matrix& lu = out.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) {
      out.singular = true;
      continue;
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      std::swap(out.perm[k], out.perm[pivot]);
      out.sign = -out.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      const double l = lu(i, k);
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
    }
  }
  return out;
}

double LuDecomposition::determinant() const {
  if (singular) return 0.0;
  double det = sign;
  for (std::size_t i = 0; i < lu.rows(); ++i) det *= lu(i, i);
  return det;
}

Vec LuDecomposition::solve(std::span<const double> b) const {
  if (singular) throw SingularMatrixError("LU solve on a singular matrix");
  const std::size_t n = lu.rows();
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  const std::size_t n = lu.rows();
  Matrix inv(n, n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const Vec col = solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

double determinant(const Matrix& a) { return lu_decompose(a).determinant(); }

double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double spectral_norm(const Matrix& a, double tol, int max_iter) {
  const Matrix ata = a.transpose() * a;
  const std::size_t n = ata.rows();
  if (n == 0) return 0.0;
  Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double rayleigh = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = ata * v;
    const double norm = euclidean_norm(w);
    if (norm == 0.0) return 0.0;
    double next = 0.0;
    for (std::size_t i = 0; i < n; ++i) next += v[i] * w[i];
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    if (it > 0 && std::abs(next - rayleigh) <= tol * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  // Final Rayleigh quotient with the converged vector.
  const Vec w = ata * v;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) q += v[i] * w[i];
  return std::sqrt(std::max(q, rayleigh));
}

double max_row_sum_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

std::vector<Matrix> schur_chain(const Matrix& spd) {
  std::vector<Matrix> chain;
  chain.push_back(spd);
  for (std::size_t k = 1; k < spd.rows(); ++k) {
    const Matrix& s = chain.back();
    const std::size_t n = s.rows() - 1;
    const double pivot = s(0, 0);
    if (!(pivot > 0.0)) throw DomainError("schur_chain: matrix is not positive definite");
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next(i, j) = s(i + 1, j + 1) - s(i + 1, 0) * s(0, j + 1) / pivot;
    chain.push_back(std::move(next));
  }
  if (!(chain.back()(0, 0) > 0.0)) throw DomainError("schur_chain: matrix is not positive definite");
  return chain;
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  std::size_t n = 0;
  for (const Matrix& b : blocks) {
    if (!b.is_square()) throw DomainError("block_diagonal: blocks must be square");
    n += b.rows();
  }
  Matrix out(n, n);
  std::size_t off = 0;
  for (const Matrix& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

bool is_block_diagonal(const Matrix& a, std::span<const int> block_dims, double tol) {
  std::vector<int> owner;
  for (std::size_t b = 0; b < block_dims.size(); ++b)
    for (int k = 0; k < block_dims[b]; ++k) owner.push_back(static_cast<int>(b));
  if (owner.size() != a.rows() || !a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (owner[i] != owner[j] && std::abs(a(i, j)) > tol) return false;
  return true;
}

bool solve_small(Matrix a, Vec b, Vec& x) {
  const LuDecomposition lu = lu_decompose(a);
  if (lu.singular) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) scale = std::max(scale, std::abs(lu.lu(i, i)));
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (std::abs(lu.lu(i, i)) <= 1e-13 * scale) return false;
  x = lu.solve(b);
  return true;
}

}  // namespace gls
