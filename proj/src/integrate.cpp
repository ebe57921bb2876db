#include "gls/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gls/error.hpp"
#include "gls/montecarlo.hpp"

namespace gls {

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "?";
}

namespace {

constexpr double kClosedRel = 1e-14;

NormEstimate closed(double value) {
  return {value, kClosedRel * value, Method::closed_form, 0, false};
}

double weight_at(std::span<const double> x, double alpha, WeightNorm norm) {
  if (alpha == 0.0) return 1.0;
  double r = 0.0;
  if (norm == WeightNorm::euclidean) {
    for (double v : x) r += v * v;
    return std::pow(r, 0.5 * alpha);
  }
  for (double v : x) r = std::max(r, std::abs(v));
  return std::pow(r, alpha);
}

// Converts an estimate of I = |f|^q_last into the norm with its error.
NormEstimate from_integral(double integral, double abs_err, double q_last, Method method, long count) {
  NormEstimate out;
  out.method = method;
  out.count = count;
  if (!(integral > 0.0)) return out;
  out.value = std::pow(integral, 1.0 / q_last);
  out.abs_error = out.value * (abs_err / integral / q_last + 1e-15);
  return out;
}

NormEstimate quad_norm(const TestFunction& f_in, const Vec& q, double alpha, WeightNorm norm,
                       const QuadOptions& opts) {
  // Without a weight the norm is translation invariant; centring puts power
  // singularities at the origin, where doubles resolve them.
  const TestFunction f = alpha == 0.0 ? f_in.centered().value_or(f_in) : f_in;
  const int d = f.dim();
  if (d > 3) throw UnsupportedError("nested quadrature is limited to d <= 3");
  const double q_min = *std::min_element(q.begin(), q.end());
  const SliceGeometry geom(f, q_min);
  NestedProblem prob;
  prob.dim = d;
  const double q0 = q[0];
  prob.leaf = [&](std::span<const double> x) {
    const double v = f.value_on_support(x);
    return (q0 == 1.0 ? v : std::pow(v, q0)) * weight_at(x, alpha, norm);
  };
  for (int k = 1; k < d; ++k) prob.power.push_back(q[static_cast<std::size_t>(k)] / q[static_cast<std::size_t>(k - 1)]);
  prob.slice = [&](int k, std::span<const double> x, double& lo, double& hi, std::vector<double>& br) {
    if (!geom.slice(k, x, lo, hi, br)) return false;
    if (alpha > 0.0) {
      br.push_back(0.0);
      if (norm == WeightNorm::max) {
        double r = 0.0;
        for (int j = k + 1; j < d; ++j) r = std::max(r, std::abs(x[static_cast<std::size_t>(j)]));
        br.push_back(r);
        br.push_back(-r);
      }
    }
    return true;
  };
  if (alpha == 0.0 && f.shapes()[0].kind != ShapeKind::power) {
    prob.level0 = [&f, q0](double lo, double hi, std::span<const double> x) {
      return *f.line_power_integral(q0, x, lo, hi);
    };
  }
  const QuadResult r = integrate_nested(prob, opts);
  return from_integral(r.value, r.abs_error, q.back(), Method::quadrature, r.evaluations);
}

// Groups of consecutive equal exponents starting at coordinate `first`.
std::vector<McGroup> exponent_groups(const Vec& q, int first) {
  std::vector<McGroup> groups;
  for (int c = first; c < static_cast<int>(q.size()); ++c) {
    const std::size_t k = static_cast<std::size_t>(c);
    if (groups.empty() || q[k] != q[k - 1]) {
      McGroup g;
      g.begin = c;
      g.end = c + 1;
      g.power = c == 0 ? 1.0 : q[k] / q[k - 1];
      groups.push_back(g);
    } else {
      groups.back().end = c + 1;
    }
  }
  return groups;
}

NormEstimate run_mc(NestedMcProblem prob, const Vec& q, long n, std::uint64_t seed, bool stratify_top) {
  const std::vector<long> budget = split_budget(n, prob.groups.size());
  for (std::size_t i = 0; i < prob.groups.size(); ++i) {
    prob.groups[i].samples = budget[i];
    prob.groups[i].stratified = i + 1 < prob.groups.size() || stratify_top;
  }
  Rng rng(seed);
  const McResult r = integrate_nested_mc(prob, rng);
  // Summation roundoff dominates when the sampled integrand is constant.
  const double roundoff = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(n)) * std::abs(r.value);
  return from_integral(r.value, 3.0 * r.std_error + roundoff, q.back(), Method::monte_carlo, r.evaluations);
}

NormEstimate mc_norm(const TestFunction& f, const Vec& q, double alpha, const NormOptions& opts) {
  const double q_min = *std::min_element(q.begin(), q.end());
  const TestFunction::Box box = f.bounding_box(q_min);
  NestedMcProblem prob;
  prob.dim = f.dim();
  const double q0 = q[0];
  const WeightNorm norm = opts.weight;
  prob.inner = [&f, q0, alpha, norm](std::span<const double> x) {
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return std::pow(v, q0) * weight_at(x, alpha, norm);
  };
  prob.groups = exponent_groups(q, 0);
  prob.lo = box.lo;
  prob.hi = box.hi;
  const bool single = prob.groups.size() == 1;
  return run_mc(std::move(prob), q, opts.mc_samples, opts.seed, single);
}

bool can_quad(const TestFunction& f) { return f.dim() <= 3 && f.quadrature_supported(); }

NormEstimate generic_norm(const TestFunction& f, const Vec& q, double alpha,
                          const std::optional<double>& closed_value, const NormOptions& opts) {
  switch (opts.backend) {
    case Backend::closed_form:
      if (!closed_value) throw UnsupportedError("no closed form for this norm of " + f.label());
      return closed(*closed_value);
    case Backend::quadrature:
      return quad_norm(f, q, alpha, opts.weight, opts.quad);
    case Backend::monte_carlo:
      return mc_norm(f, q, alpha, opts);
    case Backend::automatic:
      break;
  }
  if (closed_value) return closed(*closed_value);
  if (can_quad(f)) return quad_norm(f, q, alpha, opts.weight, opts.quad);
  return mc_norm(f, q, alpha, opts);
}

}  // namespace

NormEstimate lp_norm(const TestFunction& f, double p, const NormOptions& options) {
  f.check_exponent(p);
  const Vec q(static_cast<std::size_t>(f.dim()), p);
  return generic_norm(f, q, 0.0, f.lp_closed(p), options);
}

NormEstimate weighted_norm(const TestFunction& f, double p, double alpha, const NormOptions& options) {
  f.check_exponent(p);
  if (!(alpha >= 0.0)) throw DomainError("weighted_norm: alpha must be >= 0");
  const Vec q(static_cast<std::size_t>(f.dim()), p);
  return generic_norm(f, q, alpha, f.weighted_closed(p, alpha, options.weight), options);
}

NormEstimate mixed_norm(const TestFunction& f, const MixedExponent& pm, const NormOptions& options) {
  if (pm.dim() != f.dim()) throw DomainError("mixed_norm: exponent blocks do not match the dimension");
  const Vec q = pm.expanded();
  for (double v : q) f.check_exponent(v);
  const std::optional<double> cf = f.mixed_closed(q);
  if (options.backend == Backend::automatic && !cf && !can_quad(f)) {
    if (exponent_groups(q, 0).size() > 2) {
      throw UnsupportedError("mixed_norm: more than two exponent blocks need a factorable function or d <= 3");
    }
  }
  return generic_norm(f, q, 0.0, cf, options);
}

NormEstimate gls_norm(const TestFunction& f, const PsiFunction& psi, const NormOptions& options) {
  const double lo = std::max(psi.lower(), 1.0);
  const double hi = std::min(psi.upper(), f.integrability_limit());
  if (!(lo < hi)) throw DomainError("gls_norm: support of psi misses the integrability range");
  long count = 0;
  const auto objective = [&](double p) {
    const NormEstimate e = lp_norm(f, p, options);
    count += std::max<long>(e.count, 1);
    return e.value / psi(p);
  };
  const SupResult s = supremum(objective, lo, hi, options.sup);
  NormEstimate out;
  out.lower_bound = true;
  out.count = s.evaluations;
  if (s.unbounded) {
    out.value = kInf;
    out.abs_error = 0.0;
    out.method = lp_norm(f, 0.5 * (lo + std::min(hi, 2.0 * lo + 1.0)), options).method;
    return out;
  }
  out.value = s.value;
  const NormEstimate at = lp_norm(f, s.argmax, options);
  out.method = at.method;
  out.abs_error = at.value > 0.0 ? s.value * at.abs_error / at.value : 0.0;
  return out;
}

NormEstimate agls_norm(const TestFunction& f, const ExponentPsi& psi, const std::vector<int>& block_dims,
                       const NormOptions& options) {
  if (block_dims.size() != psi.arity()) throw DomainError("agls_norm: psi arity does not match the blocks");
  int total = 0;
  for (int m : block_dims) total += m;
  if (total != f.dim()) throw DomainError("agls_norm: blocks do not cover the dimension");

  if (psi.is_factorable() && f.factorable_over(block_dims)) {
    const std::vector<TestFunction> parts = f.split(block_dims);
    NormEstimate out;
    out.value = 1.0;
    out.lower_bound = true;
    double rel = 0.0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const NormEstimate e = gls_norm(parts[j], psi.factors()[j], options);
      out.value *= e.value;
      out.count += e.count;
      out.method = e.method;
      rel += e.value > 0.0 ? e.abs_error / e.value : 0.0;
    }
    out.abs_error = std::isfinite(out.value) ? out.value * rel : 0.0;
    return out;
  }
  if (psi.arity() > 3) throw UnsupportedError("agls_norm: grid search is limited to three exponent blocks");
  std::vector<Interval> box = psi.domain();
  for (Interval& iv : box) {
    iv.lo = std::max(iv.lo, 1.0);
    iv.hi = std::min(iv.hi, f.integrability_limit());
    if (!(iv.lo < iv.hi)) throw DomainError("agls_norm: empty exponent domain");
  }
  const auto objective = [&](std::span<const double> p) {
    const MixedExponent pm(Vec(p.begin(), p.end()), block_dims);
    return mixed_norm(f, pm, options).value / psi(p);
  };
  const MultiSupResult s = supremum_box(objective, box, options.agls_nodes, options.sup.golden_tol);
  NormEstimate out;
  out.lower_bound = true;
  out.count = s.evaluations;
  if (s.unbounded) {
    out.value = kInf;
    return out;
  }
  out.value = s.value;
  const NormEstimate at = mixed_norm(f, MixedExponent(s.argmax, block_dims), options);
  out.method = at.method;
  out.abs_error = at.value > 0.0 ? s.value * at.abs_error / at.value : 0.0;
  return out;
}

namespace {

NormEstimate region_mc(int d, const MixedExponent& pm, long n, std::uint64_t seed, Vec lo, Vec hi,
                       std::function<double(std::span<const double>)> chord, double exact_1d) {
  if (pm.dim() != d) throw DomainError("mc_region_norm: exponent blocks do not match the region");
  if (n < 10000) throw DomainError("mc_region_norm: need at least 10^4 samples");
  const Vec q = pm.expanded();
  for (double v : q)
    if (!(v >= 1.0)) throw DomainError("mc_region_norm: exponents must be >= 1");
  if (d == 1) {
    NormEstimate out = closed(std::pow(exact_1d, 1.0 / q[0]));
    return out;
  }
  NestedMcProblem prob;
  prob.dim = d;
  prob.inner = std::move(chord);
  prob.groups = exponent_groups(q, 1);
  prob.lo = std::move(lo);
  prob.hi = std::move(hi);
  return run_mc(std::move(prob), q, n, seed, false);
}

}  // namespace

NormEstimate mc_region_norm(const Ellipsoid& region, const MixedExponent& pm, long n, std::uint64_t seed) {
  region.validate();
  const int d = region.dim();
  Vec c = region.center.empty() ? Vec(static_cast<std::size_t>(d), 0.0) : region.center;
  Vec axes(static_cast<std::size_t>(d));
  Vec lo(axes.size()), hi(axes.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    axes[i] = region.radius * region.semi_axes[i];
    lo[i] = c[i] - axes[i];
    hi[i] = c[i] + axes[i];
  }
  auto chord = [c, axes](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 1; i < axes.size(); ++i) {
      const double t = (x[i] - c[i]) / axes[i];
      s += t * t;
    }
    return s < 1.0 ? 2.0 * axes[0] * std::sqrt(1.0 - s) : 0.0;
  };
  return region_mc(d, pm, n, seed, std::move(lo), std::move(hi), chord, 2.0 * axes[0]);
}

NormEstimate mc_region_norm(const Parallelepiped& region, const MixedExponent& pm, long n,
                            std::uint64_t seed) {
  region.validate();
  const int d = region.dim();
  Vec o = region.origin.empty() ? Vec(static_cast<std::size_t>(d), 0.0) : region.origin;
  Vec lo(o.size()), hi(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) {
    lo[i] = o[i];
    hi[i] = o[i] + region.sides[i];
  }
  auto chord = [side = region.sides[0]](std::span<const double>) { return side; };
  return region_mc(d, pm, n, seed, std::move(lo), std::move(hi), chord, region.sides[0]);
}

PsiFunction natural_psi_of(const TestFunction& f, double a, double b, int n, const NormOptions& options) {
  if (!(a >= 1.0) || !(a < b) || !std::isfinite(b)) {
    throw DomainError("natural_psi_of: need 1 <= a < b < inf");
  }
  if (!(b < f.integrability_limit())) throw DomainError("natural_psi_of: f is not in L_b");
  if (n < 2) throw DomainError("natural_psi_of: need at least two samples");
  std::vector<std::pair<double, double>> samples;
  for (int i = n - 1; i >= 0; --i) {
    const double u = 1.0 / b + (1.0 / a - 1.0 / b) * static_cast<double>(i) / (n - 1);
    double p = 1.0 / u;
    if (i == n - 1) p = a;
    if (i == 0) p = b;
    samples.emplace_back(p, lp_norm(f, p, options).value);
  }
  return natural_psi(samples, "natural(" + f.label() + ")");
}

ExponentPsi natural_exponent_psi(const TestFunction& f, const std::vector<int>& block_dims,
                                 const std::vector<Interval>& domain, int n, const NormOptions& options) {
  if (domain.size() != block_dims.size()) throw DomainError("natural_exponent_psi: domain size mismatch");
  const std::vector<TestFunction> parts = f.split(block_dims);
  std::vector<PsiFunction> factors;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    factors.push_back(natural_psi_of(parts[j], domain[j].lo, domain[j].hi, n, options));
  }
  return ExponentPsi::factorable(std::move(factors));
}

}  // namespace gls
