#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gls/linalg.hpp"
#include "gls/psi.hpp"
#include "gls/supremum.hpp"

namespace gls {

/// Per-block exponents p_1..p_l with block dimensions m_1..m_l (d = sum m_j).
/// Block 1 is integrated first (innermost).
class MixedExponent {
 public:
  MixedExponent(std::vector<double> p, std::vector<int> m);
  /// One exponent per coordinate (all blocks one-dimensional).
  static MixedExponent per_coordinate(std::vector<double> p);
  /// A single block with one exponent: the plain L_p norm on R^d.
  static MixedExponent uniform(int d, double p);

  const std::vector<double>& p() const { return p_; }
  const std::vector<int>& m() const { return m_; }
  std::size_t blocks() const { return p_.size(); }
  int dim() const { return d_; }
  /// The exponent of each coordinate (block exponent repeated m_j times).
  Vec expanded() const;

 private:
  std::vector<double> p_;
  std::vector<int> m_;
  int d_ = 0;
};

/// Axis-aligned ellipsoid sum ((x_i - c_i) / a_i)^2 <= R^2.
struct Ellipsoid {
  Vec semi_axes;
  double radius = 1.0;
  Vec center;  // empty means the origin

  int dim() const { return static_cast<int>(semi_axes.size()); }
  void validate() const;
};

/// Box origin_j <= x_j <= origin_j + sides_j.
struct Parallelepiped {
  Vec origin;  // empty means the origin
  Vec sides;

  int dim() const { return static_cast<int>(sides.size()); }
  void validate() const;
};

double fundamental_lp(double delta, double p);

/// Fundamental function of the GLS space G(tau): sup over the open support
/// of delta^(1/p) / tau(p).
double fundamental_gls(const PsiFunction& tau, double delta, const SupOptions& options = {});
SupResult fundamental_gls_detail(const PsiFunction& tau, double delta,
                                 const SupOptions& options = {});

/// Factor Z_k of the ellipsoid recurrence (k is 1-based):
/// Z_1 = 2^(1/p_1), Z_k = B(1/2, 1 + (p_k / 2) sum_{i<k} 1/p_i)^(1/p_k).
double theta_factor(std::span<const double> p, std::size_t k);

/// Mixed-norm fundamental value of the unit ball, Z_1 * ... * Z_d.
double theta_unit(std::span<const double> p);
double log_theta_unit(std::span<const double> p);

/// Mixed-norm fundamental value of the ellipsoid with semi-axes a scaled by R:
/// theta_unit(p) * prod a_i^(1/p_i) * R^(sum 1/p_i).
double theta_scaled(std::span<const double> p, std::span<const double> semi_axes, double radius);

/// prod delta_j^(1/p_j): mixed-norm fundamental value of a box.
double fundamental_box(std::span<const double> p, std::span<const double> sides);

/// Fundamental value of a Cartesian product from its per-block values.
double fundamental_product_set(std::span<const double> block_values);

/// One factor of a product set: a box or an axis-aligned ellipsoid in R^m.
struct SetBlock {
  enum class Kind { box, ellipsoid };

  Kind kind = Kind::box;
  Vec extent;  // box sides or ellipsoid semi-axes
  double radius = 1.0;

  static SetBlock box(Vec sides) { return {Kind::box, std::move(sides), 1.0}; }
  static SetBlock cube(int m, double side) { return box(Vec(static_cast<std::size_t>(m), side)); }
  static SetBlock ellipsoid(Vec axes, double radius = 1.0) {
    return {Kind::ellipsoid, std::move(axes), radius};
  }

  int dim() const { return static_cast<int>(extent.size()); }
  double volume() const;
  /// Fundamental value under per-coordinate exponents q (size dim()).
  double fundamental(std::span<const double> q) const;
};

using ProductSet = std::vector<SetBlock>;

/// phi_p(D) for D = F_1 x ... x F_l with one exponent per block.
double product_set_fundamental(const ProductSet& set, std::span<const double> block_p);

/// Weight over an exponent domain Q (a box of intervals, one per block).
/// Factorable weights keep their factors so sups can be split per block.
class ExponentPsi {
 public:
  using Eval = std::function<double(std::span<const double>)>;

  ExponentPsi(std::vector<Interval> domain, Eval eval, std::string label);
  static ExponentPsi factorable(std::vector<PsiFunction> factors);

  double operator()(std::span<const double> p) const;

  std::size_t arity() const { return domain_.size(); }
  const std::vector<Interval>& domain() const { return domain_; }
  bool is_factorable() const { return !factors_.empty(); }
  const std::vector<PsiFunction>& factors() const { return factors_; }
  const std::string& label() const { return label_; }

  ExponentPsi times(const ExponentPsi& other) const;

 private:
  std::vector<Interval> domain_;
  Eval eval_;
  std::string label_;
  std::vector<PsiFunction> factors_;
};

struct AglsOptions {
  SupOptions sup;
  int nodes_per_axis = 64;
};

/// sup over the interior of Q of phi_p(D) / psi(p). Factorable psi splits
/// into one-dimensional problems; otherwise a grid search (at most three
/// exponent coordinates).
double fundamental_agls(const ExponentPsi& psi, const ProductSet& set,
                        const AglsOptions& options = {});

struct TildeRow {
  double delta = 0.0;
  double phi = 0.0;
  /// delta < 1: ratio against beta^beta |ln delta|^(-beta), and against
  /// (beta/e)^beta |ln delta|^(-beta).
  std::optional<double> ratio_small;
  std::optional<double> ratio_small_e;
  /// delta > 1: ratios against (a^2 alpha / e)^alpha delta^(1/alpha) (ln delta)^(-alpha)
  /// and the same with delta^(1/a).
  std::optional<double> ratio_large_alpha;
  std::optional<double> ratio_large_a;
};

std::vector<TildeRow> tilde_phi_asymptotic_check(double a, double alpha, double beta,
                                                 std::span<const double> deltas,
                                                 const SupOptions& options = {});

}  // namespace gls
