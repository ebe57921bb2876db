#include "gls/fundamental.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gls/error.hpp"
#include "gls/mathcore.hpp"

namespace gls {

namespace {

void check_exponents(std::span<const double> p, const char* who) {
  if (p.empty()) throw DomainError(std::string(who) + ": empty exponent vector");
  for (double v : p)
    if (!(v >= 1.0) || !std::isfinite(v))
      throw DomainError(std::string(who) + ": exponents must be finite and >= 1");
}

void check_positive(std::span<const double> v, const char* who) {
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError(std::string(who) + ": entries must be positive and finite");
}

}  // namespace

MixedExponent::MixedExponent(std::vector<double> p, std::vector<int> m)
    : p_(std::move(p)), m_(std::move(m)) {
  if (p_.size() != m_.size()) throw DomainError("MixedExponent: p and m lengths differ");
  check_exponents(p_, "MixedExponent");
  for (int mj : m_) {
    if (mj < 1) throw DomainError("MixedExponent: block dimensions must be >= 1");
    d_ += mj;
  }
}

MixedExponent MixedExponent::per_coordinate(std::vector<double> p) {
  std::vector<int> m(p.size(), 1);
  return MixedExponent(std::move(p), std::move(m));
}

MixedExponent MixedExponent::uniform(int d, double p) { return MixedExponent({p}, {d}); }

Vec MixedExponent::expanded() const {
  Vec q;
  q.reserve(static_cast<std::size_t>(d_));
  for (std::size_t j = 0; j < p_.size(); ++j) q.insert(q.end(), static_cast<std::size_t>(m_[j]), p_[j]);
  return q;
}

void Ellipsoid::validate() const {
  if (semi_axes.empty()) throw DomainError("Ellipsoid: no semi-axes");
  check_positive(semi_axes, "Ellipsoid");
  if (!(radius > 0.0)) throw DomainError("Ellipsoid: radius must be positive");
  if (!center.empty() && center.size() != semi_axes.size())
    throw DomainError("Ellipsoid: center dimension mismatch");
}

void Parallelepiped::validate() const {
  if (sides.empty()) throw DomainError("Parallelepiped: no sides");
  check_positive(sides, "Parallelepiped");
  if (!origin.empty() && origin.size() != sides.size())
    throw DomainError("Parallelepiped: origin dimension mismatch");
}

double fundamental_lp(double delta, double p) {
  if (!(delta >= 0.0) || !(p >= 1.0)) throw DomainError("fundamental_lp: need delta >= 0, p >= 1");
  return std::pow(delta, 1.0 / p);
}

SupResult fundamental_gls_detail(const PsiFunction& tau, double delta, const SupOptions& options) {
  if (!(delta >= 0.0)) throw DomainError("fundamental_gls: delta must be non-negative");
  if (delta == 0.0) return SupResult{};
  return supremum([&](double p) { return std::pow(delta, 1.0 / p) / tau(p); }, tau.lower(),
                  tau.upper(), options);
}

double fundamental_gls(const PsiFunction& tau, double delta, const SupOptions& options) {
  return fundamental_gls_detail(tau, delta, options).value;
}

double theta_factor(std::span<const double> p, std::size_t k) {
  check_exponents(p, "theta_factor");
  if (k < 1 || k > p.size()) throw DomainError("theta_factor: index out of range");
  if (k == 1) return std::pow(2.0, 1.0 / p[0]);
  double inv_sum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) inv_sum += 1.0 / p[i];
  const double pk = p[k - 1];
  return std::exp(log_beta(0.5, 1.0 + 0.5 * pk * inv_sum) / pk);
}

double log_theta_unit(std::span<const double> p) {
  check_exponents(p, "theta_unit");
  double log_theta = std::numbers::ln2 / p[0];
  double inv_sum = 1.0 / p[0];
  for (std::size_t k = 1; k < p.size(); ++k) {
    log_theta += log_beta(0.5, 1.0 + 0.5 * p[k] * inv_sum) / p[k];
    inv_sum += 1.0 / p[k];
  }
  return log_theta;
}

double theta_unit(std::span<const double> p) { return std::exp(log_theta_unit(p)); }

double theta_scaled(std::span<const double> p, std::span<const double> semi_axes, double radius) {
  if (semi_axes.size() != p.size()) throw DomainError("theta_scaled: dimension mismatch");
  check_positive(semi_axes, "theta_scaled");
  if (!(radius > 0.0)) throw DomainError("theta_scaled: radius must be positive");
  double log_v = log_theta_unit(p);
  const double log_r = std::log(radius);
  for (std::size_t i = 0; i < p.size(); ++i) log_v += (std::log(semi_axes[i]) + log_r) / p[i];
  return std::exp(log_v);
}

double fundamental_box(std::span<const double> p, std::span<const double> sides) {
  if (sides.size() != p.size()) throw DomainError("fundamental_box: dimension mismatch");
  check_exponents(p, "fundamental_box");
  check_positive(sides, "fundamental_box");
  double log_v = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) log_v += std::log(sides[j]) / p[j];
  return std::exp(log_v);
}

double fundamental_product_set(std::span<const double> block_values) {
  double v = 1.0;
  for (double b : block_values) {
    if (!(b >= 0.0)) throw DomainError("fundamental_product_set: block values must be >= 0");
    v *= b;
  }
  return v;
}

double SetBlock::volume() const {
  double v = 1.0;
  for (double e : extent) v *= e;
  if (kind == Kind::ellipsoid) v *= ball_volume(dim()) * std::pow(radius, dim());
  return v;
}

double SetBlock::fundamental(std::span<const double> q) const {
  if (kind == Kind::box) return fundamental_box(q, extent);
  return theta_scaled(q, extent, radius);
}

double product_set_fundamental(const ProductSet& set, std::span<const double> block_p) {
  if (set.size() != block_p.size()) throw DomainError("product_set_fundamental: block count mismatch");
  Vec values;
  values.reserve(set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    const Vec q(static_cast<std::size_t>(set[j].dim()), block_p[j]);
    values.push_back(set[j].fundamental(q));
  }
  return fundamental_product_set(values);
}

ExponentPsi::ExponentPsi(std::vector<Interval> domain, Eval eval, std::string label)
    : domain_(std::move(domain)), eval_(std::move(eval)), label_(std::move(label)) {
  if (domain_.empty()) throw DomainError("ExponentPsi: empty domain");
  for (const Interval& iv : domain_)
    if (!(iv.lo >= 1.0) || !(iv.lo < iv.hi)) throw DomainError("ExponentPsi: invalid domain interval");
}

ExponentPsi ExponentPsi::factorable(std::vector<PsiFunction> factors) {
  std::vector<Interval> domain;
  std::string label;
  for (const PsiFunction& f : factors) {
    domain.push_back(f.support());
    label += (label.empty() ? "" : " x ") + f.label();
  }
  auto eval = [factors](std::span<const double> p) {
    double v = 1.0;
    for (std::size_t j = 0; j < factors.size(); ++j) v *= factors[j](p[j]);
    return v;
  };
  ExponentPsi out(std::move(domain), eval, label);
  out.factors_ = std::move(factors);
  return out;
}

double ExponentPsi::operator()(std::span<const double> p) const {
  if (p.size() != domain_.size()) throw DomainError("ExponentPsi: arity mismatch");
  for (std::size_t j = 0; j < p.size(); ++j)
    if (!(p[j] >= domain_[j].lo) || p[j] > domain_[j].hi) return kInf;
  return eval_(p);
}

ExponentPsi ExponentPsi::times(const ExponentPsi& other) const {
  if (other.arity() != arity()) throw DomainError("ExponentPsi::times: arity mismatch");
  if (is_factorable() && other.is_factorable()) {
    std::vector<PsiFunction> f;
    for (std::size_t j = 0; j < arity(); ++j) f.push_back(psi_product(factors_[j], other.factors_[j]));
    return factorable(std::move(f));
  }
  std::vector<Interval> domain;
  for (std::size_t j = 0; j < arity(); ++j) {
    const Interval iv{std::max(domain_[j].lo, other.domain_[j].lo),
                      std::min(domain_[j].hi, other.domain_[j].hi)};
    if (!(iv.lo < iv.hi)) throw DomainError("ExponentPsi::times: domains do not intersect");
    domain.push_back(iv);
  }
  const ExponentPsi a = *this;
  const ExponentPsi b = other;
  return ExponentPsi(std::move(domain), [a, b](std::span<const double> p) { return a(p) * b(p); },
                     label_ + "*" + other.label_);
}

double fundamental_agls(const ExponentPsi& psi, const ProductSet& set, const AglsOptions& options) {
  if (set.size() != psi.arity()) throw DomainError("fundamental_agls: block count mismatch");
  if (psi.is_factorable()) {
    double v = 1.0;
    for (std::size_t j = 0; j < set.size(); ++j)
      v *= fundamental_gls(psi.factors()[j], set[j].volume(), options.sup);
    return v;
  }
  if (psi.arity() > 3) {
    throw UnsupportedError("fundamental_agls: non-factorable weights need at most 3 exponent coordinates");
  }
  const auto objective = [&](std::span<const double> p) {
    return product_set_fundamental(set, p) / psi(p);
  };
  return supremum_box(objective, psi.domain(), options.nodes_per_axis, options.sup.golden_tol).value;
}

std::vector<TildeRow> tilde_phi_asymptotic_check(double a, double alpha, double beta,
                                                 std::span<const double> deltas,
                                                 const SupOptions& options) {
  const PsiFunction psi = psi_tilde(a, alpha, beta).function();
  std::vector<TildeRow> rows;
  for (double delta : deltas) {
    TildeRow row;
    row.delta = delta;
    row.phi = fundamental_gls(psi, delta, options);
    const double log_d = std::log(delta);
    if (delta < 1.0) {
      const double l = std::abs(log_d);
      row.ratio_small = row.phi / (std::pow(beta, beta) * std::pow(l, -beta));
      row.ratio_small_e = row.phi / (std::pow(beta / std::numbers::e, beta) * std::pow(l, -beta));
    } else if (delta > 1.0) {
      const double c = std::pow(a * a * alpha / std::numbers::e, alpha) * std::pow(log_d, -alpha);
      row.ratio_large_alpha = row.phi / (c * std::pow(delta, 1.0 / alpha));
      row.ratio_large_a = row.phi / (c * std::pow(delta, 1.0 / a));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gls
