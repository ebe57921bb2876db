#include "gls/psi.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "gls/error.hpp"
#include "gls/mathcore.hpp"

namespace gls {

namespace {

void check_support(double a, double b, const char* who) {
  if (!(a >= 1.0) || !(a < b) || std::isnan(b)) {
    std::ostringstream msg;
    msg << who << ": support must satisfy 1 <= a < b <= inf, got (" << a << ", " << b << ")";
    throw DomainError(msg.str());
  }
}

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << v;
  return s.str();
}

Interval intersect(const PsiFunction& x, const PsiFunction& y, const char* who) {
  const double lo = std::max(x.lower(), y.lower());
  const double hi = std::min(x.upper(), y.upper());
  if (!(lo < hi)) throw DomainError(std::string(who) + ": supports do not intersect");
  return {lo, hi};
}

}  // namespace

PsiFunction::PsiFunction(double lower, double upper, Eval eval, std::string label)
    : lower_(lower), upper_(upper), eval_(std::move(eval)), label_(std::move(label)) {
  check_support(lower_, upper_, "PsiFunction");
}

double PsiFunction::operator()(double p) const {
  if (!(p >= lower_) || p > upper_) return kInf;
  return eval_(p);
}

PsiFunction PsiFunction::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("PsiFunction::scaled: factor must be positive");
  return PsiFunction(lower_, upper_, [eval = eval_, c](double p) { return c * eval(p); },
                     fmt(c) + "*" + label_);
}

PsiFunction psi_constant(double value, double a, double b) {
  if (!(value > 0.0)) throw DomainError("psi_constant: value must be positive");
  return PsiFunction(a, b, [value](double) { return value; }, "const(" + fmt(value) + ")");
}

PsiFunction psi_power(double lambda, double a, double b) {
  if (!(lambda > 0.0)) throw DomainError("psi_power: lambda must be positive");
  const double e = 1.0 / lambda;
  return PsiFunction(a, b, [e](double p) { return std::pow(p, e); },
                     "power(lambda=" + fmt(lambda) + ")");
}

PsiFunction psi_custom(double a, double b, PsiFunction::Eval eval, std::string label) {
  return PsiFunction(a, b, std::move(eval), std::move(label));
}

PsiFunction psi_product(const PsiFunction& psi, const PsiFunction& zeta) {
  const Interval s = intersect(psi, zeta, "psi_product");
  return PsiFunction(s.lo, s.hi, [psi, zeta](double p) { return psi(p) * zeta(p); },
                     psi.label() + "*" + zeta.label());
}

PsiFunction psi_quotient(const PsiFunction& nu, const PsiFunction& zeta) {
  const Interval s = intersect(nu, zeta, "psi_quotient");
  PsiFunction out(s.lo, s.hi, [nu, zeta](double p) { return nu(p) / zeta(p); },
                  nu.label() + "/" + zeta.label());
  const double m = grid_minimum(out);
  if (!(m > 0.0) || !std::isfinite(m)) {
    std::cerr << "warning: psi_quotient " << out.label()
              << " is not bounded away from zero on its support (grid min " << m << ")\n";
  }
  return out;
}

PsiFunction natural_psi(std::span<const std::pair<double, double>> samples, std::string label) {
  if (samples.size() < 2) throw DomainError("natural_psi: need at least two samples");
  std::vector<double> inv_p;
  std::vector<double> log_v;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [p, v] = samples[i];
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("natural_psi: samples must be positive");
    if (i > 0 && !(p > samples[i - 1].first)) {
      throw DomainError("natural_psi: exponents must be strictly increasing");
    }
    inv_p.push_back(1.0 / p);
    log_v.push_back(std::log(v));
  }
  const double lo = samples.front().first;
  const double hi = samples.back().first;
  auto eval = [inv_p, log_v](double p) {
    const double u = 1.0 / p;
    // inv_p is decreasing
    auto it = std::lower_bound(inv_p.rbegin(), inv_p.rend(), u);
    // inv_p[k - 1] >= u > inv_p[k]
    std::size_t k = static_cast<std::size_t>(inv_p.rend() - it);
    if (k == 0) return std::exp(log_v.front());
    if (k >= inv_p.size()) return std::exp(log_v.back());
    const double u0 = inv_p[k - 1];
    const double u1 = inv_p[k];
    const double t = (u - u0) / (u1 - u0);
    return std::exp(log_v[k - 1] + t * (log_v[k] - log_v[k - 1]));
  };
  return PsiFunction(lo, hi, eval, std::move(label));
}

PsiTilde::PsiTilde(double a, double alpha, double beta) : a_(a), alpha_(alpha), beta_(beta) {
  if (!(a >= 1.0) || !(alpha > 0.0) || !(beta > 0.0)) {
    throw DomainError("psi_tilde: need a >= 1, alpha > 0, beta > 0");
  }
  // (h - a)^(-alpha) - h^beta is decreasing in h on (a, inf).
  const auto g = [this](double h) { return std::pow(h - a_, -alpha_) - std::pow(h, beta_); };
  double lo_gap = 1e-3;
  while (g(a_ + lo_gap) <= 0.0) {
    lo_gap *= 1e-3;
    if (lo_gap < 1e-300) throw BracketError("psi_tilde: could not bracket the crossover from below");
  }
  double hi = a_ + 1.0;
  while (g(hi) >= 0.0) {
    hi = a_ + 2.0 * (hi - a_);
    if (hi > 1e300) throw BracketError("psi_tilde: could not bracket the crossover from above");
  }
  h_ = find_root_increasing(g, a_ + lo_gap, hi, 0.0);
}

double PsiTilde::operator()(double p) const {
  if (!(p > a_)) return kInf;
  return p < h_ ? std::pow(p - a_, -alpha_) : std::pow(p, beta_);
}

PsiFunction PsiTilde::function() const {
  const PsiTilde self = *this;
  return PsiFunction(a_, kInf, [self](double p) { return self(p); },
                     "tilde(a=" + fmt(a_) + ",alpha=" + fmt(alpha_) + ",beta=" + fmt(beta_) + ")");
}

PsiTilde psi_tilde(double a, double alpha, double beta) { return PsiTilde(a, alpha, beta); }

const char* to_string(Precedence v) {
  switch (v) {
    case Precedence::yes: return "true";
    case Precedence::no: return "false";
    case Precedence::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Precedence precedes(const PsiFunction& psi1, const PsiFunction& psi2,
                    std::span<const double> probe, const PrecedesOptions& options) {
  std::vector<double> grow;
  std::vector<double> ratio;
  for (double p : probe) {
    const double v1 = psi1(p);
    const double v2 = psi2(p);
    if (!std::isfinite(v1) || !std::isfinite(v2)) continue;
    grow.push_back(v2);
    ratio.push_back(v1 / v2);
  }
  const std::size_t k = static_cast<std::size_t>(options.tail);
  if (ratio.size() < k || k < 2) throw DomainError("precedes: probe too short");
  const double v2_min = *std::min_element(grow.begin(), grow.end());
  bool tail_nondecreasing = true;
  for (std::size_t i = grow.size() - k + 1; i < grow.size(); ++i)
    tail_nondecreasing = tail_nondecreasing && grow[i] >= grow[i - 1];
  if (!(grow.back() >= options.min_growth * v2_min) || !tail_nondecreasing) {
    throw DomainError("precedes: psi2 stays bounded along the probe; relation undefined");
  }

  const std::span<const double> tail(ratio.data() + ratio.size() - k, k);
  bool decreasing = true;
  for (std::size_t i = 1; i < k; ++i) decreasing = decreasing && tail[i] < tail[i - 1];
  const double tail_min = *std::min_element(tail.begin(), tail.end());
  if (tail.back() < options.threshold && decreasing) return Precedence::yes;
  if (tail_min >= options.threshold && tail_min >= 0.25 * tail.front()) return Precedence::no;
  return Precedence::inconclusive;
}

std::vector<double> dyadic_probe(int k_first, int k_last) {
  std::vector<double> out;
  for (int k = k_first; k <= k_last; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

double grid_minimum(const PsiFunction& psi, int points) {
  double m = kInf;
  for (double p : open_interval_grid(psi.lower(), psi.upper(), points)) m = std::min(m, psi(p));
  return m;
}

}  // namespace gls
