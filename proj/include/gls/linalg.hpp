#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gls {

using Vec = std::vector<double>;

/// Small dense row-major matrix. Dimensions here are tiny (d <= ~8), so no
/// blocking or expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> entries);
  static Matrix scalar(std::size_t n, double lambda);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& rhs) const;
  Vec operator*(std::span<const double> x) const;
  Matrix operator*(double s) const;

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LuDecomposition {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;

  double determinant() const;
  Vec solve(std::span<const double> b) const;
  Matrix inverse() const;
};

LuDecomposition lu_decompose(const Matrix& a);
double determinant(const Matrix& a);

/// Largest singular value via power iteration on A^T A, started from the
/// normalised all-ones vector. Stops when the Rayleigh quotient changes by
/// less than tol (relative) or after max_iter steps.
double spectral_norm(const Matrix& a, double tol = 1e-12, int max_iter = 10000);

/// Induced max-norm (maximum absolute row sum).
double max_row_sum_norm(const Matrix& a);

double euclidean_norm(std::span<const double> x);

/// Successive Schur complements of a symmetric positive definite matrix:
/// entry k is the complement left after eliminating the first k coordinates
/// (entry 0 is the matrix itself). Entry k has size (n-k) x (n-k).
std::vector<Matrix> schur_chain(const Matrix& spd);

Matrix block_diagonal(std::span<const Matrix> blocks);

/// True if the off-block entries vanish for the given consecutive block sizes.
bool is_block_diagonal(const Matrix& a, std::span<const int> block_dims, double tol = 0.0);

/// Solve a small square system; returns false if it is (numerically) singular.
bool solve_small(Matrix a, Vec b, Vec& x);

}  // namespace gls
