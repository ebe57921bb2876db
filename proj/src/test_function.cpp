#include "gls/test_function.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gls/error.hpp"
#include "gls/mathcore.hpp"
#include "gls/supremum.hpp"

namespace gls {

namespace {

double log_shape_norm(const Shape& s, double p) {
  const double m = s.dim;
  switch (s.kind) {
    case ShapeKind::gaussian:
      return m / (2.0 * p) * std::log(std::numbers::pi / p);
    case ShapeKind::ball:
      return log_ball_volume(s.dim) / p;
    case ShapeKind::cube:
      return 0.0;
    case ShapeKind::simplex:
      return -log_gamma(m + 1.0) / p;
    case ShapeKind::power: {
      const double e = m - s.gamma * p;
      return (std::log(m) + log_ball_volume(s.dim) + e * std::log(s.radius) - std::log(e)) / p;
    }
  }
  return 0.0;
}

bool is_indicator_shape(ShapeKind k) {
  return k == ShapeKind::ball || k == ShapeKind::cube || k == ShapeKind::simplex;
}

// Product of one-dimensional shapes in its coordinates.
bool is_separable(ShapeKind k) { return k == ShapeKind::gaussian || k == ShapeKind::cube; }

double shape_value(const Shape& s, const double* y, bool trust_support) {
  double r2 = 0.0;
  switch (s.kind) {
    case ShapeKind::gaussian:
      for (int i = 0; i < s.dim; ++i) r2 += y[i] * y[i];
      return std::exp(-r2);
    case ShapeKind::ball:
      if (trust_support) return 1.0;
      for (int i = 0; i < s.dim; ++i) r2 += y[i] * y[i];
      return r2 <= 1.0 ? 1.0 : 0.0;
    case ShapeKind::cube:
      if (trust_support) return 1.0;
      for (int i = 0; i < s.dim; ++i)
        if (y[i] < 0.0 || y[i] > 1.0) return 0.0;
      return 1.0;
    case ShapeKind::simplex: {
      if (trust_support) return 1.0;
      double sum = 0.0;
      for (int i = 0; i < s.dim; ++i) {
        if (y[i] < 0.0) return 0.0;
        sum += y[i];
      }
      return sum <= 1.0 ? 1.0 : 0.0;
    }
    case ShapeKind::power:
      for (int i = 0; i < s.dim; ++i) r2 += y[i] * y[i];
      if (!trust_support && r2 > s.radius * s.radius) return 0.0;
      if (r2 > 0.0) return std::pow(r2, -0.5 * s.gamma);
      // Quadrature nodes next to the singular point can round onto it; the
      // point is a null set, so integrators drop it.
      return trust_support ? 0.0 : kInf;
  }
  return 0.0;
}

bool scalar_map(const Matrix& m, double& s) {
  s = m(0, 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != (i == j ? s : 0.0)) return false;
  return s != 0.0;
}

}  // namespace

TestFunction::TestFunction(std::vector<Shape> shapes, Matrix map, Vec shift, double amplitude,
                           std::string label)
    : shapes_(std::move(shapes)),
      map_(std::move(map)),
      shift_(std::move(shift)),
      amplitude_(amplitude),
      label_(std::move(label)) {
  if (!map_.is_square() || map_.rows() == 0) throw DomainError("TestFunction: map must be square");
  int total = 0;
  for (const Shape& s : shapes_) {
    if (s.dim < 1) throw DomainError("TestFunction: shape dimension must be >= 1");
    if (s.kind == ShapeKind::power && (!(s.gamma >= 0.0) || !(s.radius > 0.0))) {
      throw DomainError("TestFunction: power shape needs gamma >= 0 and radius > 0");
    }
    if (s.kind == ShapeKind::gaussian && s.radius <= 0.0) throw DomainError("TestFunction: bad radius");
    shape_offset_.push_back(total);
    total += s.dim;
  }
  if (total != dim()) throw DomainError("TestFunction: shape dimensions do not add up to the map size");
  if (shift_.empty()) shift_.assign(static_cast<std::size_t>(total), 0.0);
  if (static_cast<int>(shift_.size()) != total) throw DomainError("TestFunction: shift size mismatch");
  if (!(amplitude_ > 0.0) || !std::isfinite(amplitude_)) {
    throw DomainError("TestFunction: amplitude must be positive");
  }
  double scale = 1.0;
  for (std::size_t i = 0; i < map_.rows(); ++i) scale *= euclidean_norm(map_.row(i));
  if (!(std::abs(determinant(map_)) > 1e-12 * scale)) {
    throw SingularMatrixError("TestFunction: map is singular");
  }
}

TestFunction TestFunction::gaussian(Vec center, Vec scales, double amplitude) {
  const std::size_t d = scales.size();
  if (center.empty()) center.assign(d, 0.0);
  if (center.size() != d) throw DomainError("gaussian: center size mismatch");
  Vec inv(d), shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(scales[i] > 0.0)) throw DomainError("gaussian: scales must be positive");
    inv[i] = 1.0 / scales[i];
    shift[i] = center[i] * inv[i];
  }
  return TestFunction({Shape{ShapeKind::gaussian, static_cast<int>(d)}}, Matrix::diagonal(inv),
                      std::move(shift), amplitude, "gaussian");
}

TestFunction TestFunction::gaussian_form(Matrix m, double amplitude) {
  const int d = static_cast<int>(m.rows());
  return TestFunction({Shape{ShapeKind::gaussian, d}}, std::move(m), {}, amplitude, "gaussian");
}

TestFunction TestFunction::box(Vec origin, Vec sides) {
  const std::size_t d = sides.size();
  if (origin.empty()) origin.assign(d, 0.0);
  if (origin.size() != d) throw DomainError("box: origin size mismatch");
  Vec inv(d), shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(sides[i] > 0.0)) throw DomainError("box: sides must be positive");
    inv[i] = 1.0 / sides[i];
    shift[i] = origin[i] * inv[i];
  }
  return TestFunction({Shape{ShapeKind::cube, static_cast<int>(d)}}, Matrix::diagonal(inv),
                      std::move(shift), 1.0, "box");
}

TestFunction TestFunction::ellipsoid(Vec center, Vec semi_axes, double radius) {
  const std::size_t d = semi_axes.size();
  if (center.empty()) center.assign(d, 0.0);
  if (center.size() != d) throw DomainError("ellipsoid: center size mismatch");
  if (!(radius > 0.0)) throw DomainError("ellipsoid: radius must be positive");
  Vec inv(d), shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(semi_axes[i] > 0.0)) throw DomainError("ellipsoid: semi-axes must be positive");
    inv[i] = 1.0 / (radius * semi_axes[i]);
    shift[i] = center[i] * inv[i];
  }
  return TestFunction({Shape{ShapeKind::ball, static_cast<int>(d)}}, Matrix::diagonal(inv),
                      std::move(shift), 1.0, "ellipsoid");
}

TestFunction TestFunction::ball(int dim, double radius) {
  return ellipsoid({}, Vec(static_cast<std::size_t>(dim), 1.0), radius);
}

TestFunction TestFunction::simplex(Vec origin, Vec scales) {
  const std::size_t d = scales.size();
  if (origin.empty()) origin.assign(d, 0.0);
  if (origin.size() != d) throw DomainError("simplex: origin size mismatch");
  Vec inv(d), shift(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!(scales[i] > 0.0)) throw DomainError("simplex: scales must be positive");
    inv[i] = 1.0 / scales[i];
    shift[i] = origin[i] * inv[i];
  }
  return TestFunction({Shape{ShapeKind::simplex, static_cast<int>(d)}}, Matrix::diagonal(inv),
                      std::move(shift), 1.0, "simplex");
}

TestFunction TestFunction::power_decay(int dim, double gamma, double radius, Vec center) {
  if (dim < 1) throw DomainError("power_decay: dimension must be >= 1");
  if (center.empty()) center.assign(static_cast<std::size_t>(dim), 0.0);
  return TestFunction({Shape{ShapeKind::power, dim, gamma, radius}},
                      Matrix::identity(static_cast<std::size_t>(dim)), std::move(center), 1.0,
                      "power");
}

TestFunction TestFunction::product(std::span<const TestFunction> factors) {
  if (factors.empty()) throw DomainError("product: no factors");
  std::vector<Shape> shapes;
  std::vector<Matrix> maps;
  Vec shift;
  double amp = 1.0;
  std::string label;
  for (const TestFunction& f : factors) {
    shapes.insert(shapes.end(), f.shapes_.begin(), f.shapes_.end());
    maps.push_back(f.map_);
    shift.insert(shift.end(), f.shift_.begin(), f.shift_.end());
    amp *= f.amplitude_;
    label += (label.empty() ? "" : "x") + f.label_;
  }
  return TestFunction(std::move(shapes), block_diagonal(maps), std::move(shift), amp, label);
}

TestFunction TestFunction::scaled(double c) const {
  TestFunction out = *this;
  if (!(c > 0.0)) throw DomainError("scaled: factor must be positive");
  out.amplitude_ *= c;
  return out;
}

TestFunction TestFunction::composed(const Matrix& a, const std::string& tag) const {
  if (!a.is_square() || static_cast<int>(a.rows()) != dim()) {
    throw DomainError("composed: matrix dimension does not match the function");
  }
  return TestFunction(shapes_, map_ * a, shift_, amplitude_, label_ + "@" + tag);
}

std::optional<TestFunction> TestFunction::centered() const {
  Vec x0;
  if (!solve_small(map_, shift_, x0)) return std::nullopt;
  return TestFunction(shapes_, map_, Vec(shift_.size(), 0.0), amplitude_, label_);
}

double TestFunction::operator()(std::span<const double> x) const {
  const Vec y0 = map_ * x;
  double v = amplitude_;
  for (std::size_t j = 0; j < shapes_.size(); ++j) {
    const int off = shape_offset_[j];
    double y[16];
    for (int i = 0; i < shapes_[j].dim; ++i) y[i] = y0[static_cast<std::size_t>(off + i)] - shift_[static_cast<std::size_t>(off + i)];
    v *= shape_value(shapes_[j], y, false);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double TestFunction::value_on_support(std::span<const double> x) const {
  const std::size_t d = map_.rows();
  double v = amplitude_;
  double y[16];
  for (std::size_t j = 0; j < shapes_.size(); ++j) {
    const Shape& s = shapes_[j];
    if (is_indicator_shape(s.kind)) continue;
    const std::size_t off = static_cast<std::size_t>(shape_offset_[j]);
    for (int i = 0; i < s.dim; ++i) {
      const std::size_t r = off + static_cast<std::size_t>(i);
      double acc = -shift_[r];
      for (std::size_t c = 0; c < d; ++c) acc += map_(r, c) * x[c];
      y[i] = acc;
    }
    v *= shape_value(s, y, true);
  }
  return v;
}

std::optional<double> TestFunction::line_power_integral(double q, std::span<const double> x, double lo,
                                                       double hi) const {
  const Shape& first = shapes_[0];
  if (first.kind == ShapeKind::power) return std::nullopt;
  const std::size_t d = map_.rows();
  double rest = amplitude_;
  double y[16];
  for (std::size_t j = 1; j < shapes_.size(); ++j) {
    const Shape& s = shapes_[j];
    if (is_indicator_shape(s.kind)) continue;
    const std::size_t off = static_cast<std::size_t>(shape_offset_[j]);
    for (int i = 0; i < s.dim; ++i) {
      const std::size_t r = off + static_cast<std::size_t>(i);
      double acc = -shift_[r];
      for (std::size_t c = 0; c < d; ++c) acc += map_(r, c) * x[c];
      y[i] = acc;
    }
    rest *= shape_value(s, y, true);
  }
  const double scale = q == 1.0 ? rest : std::pow(rest, q);
  if (is_indicator_shape(first.kind)) return scale * (hi - lo);

  // |y(t)|^2 = A t^2 + 2 B t + C along x_0 = t within the first factor.
  double a = 0.0, b = 0.0, c = 0.0;
  for (int i = 0; i < first.dim; ++i) {
    const std::size_t r = static_cast<std::size_t>(i);
    double y0 = -shift_[r];
    for (std::size_t k = 1; k < d; ++k) y0 += map_(r, k) * x[k];
    const double m0 = map_(r, 0);
    a += m0 * m0;
    b += y0 * m0;
    c += y0 * y0;
  }
  const double s = std::sqrt(q * a);
  const double z_lo = s * (lo + b / a);
  const double z_hi = s * (hi + b / a);
  double diff = 0.0;
  if (z_lo >= 0.0) diff = std::erfc(z_lo) - std::erfc(z_hi);
  else if (z_hi <= 0.0) diff = std::erfc(-z_hi) - std::erfc(-z_lo);
  else diff = std::erf(z_hi) - std::erf(z_lo);
  const double floor = std::max(c - b * b / a, 0.0);
  return scale * std::exp(-q * floor) * 0.5 * std::sqrt(std::numbers::pi) / s * diff;
}

bool TestFunction::is_indicator() const {
  return std::all_of(shapes_.begin(), shapes_.end(),
                     [](const Shape& s) { return is_indicator_shape(s.kind); });
}

double TestFunction::integrability_limit() const {
  double limit = kInf;
  for (const Shape& s : shapes_)
    if (s.kind == ShapeKind::power && s.gamma > 0.0) limit = std::min(limit, s.dim / s.gamma);
  return limit;
}

void TestFunction::check_exponent(double p) const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent must be a finite p >= 1");
  if (!(p < integrability_limit())) {
    throw DomainError("exponent outside the integrability range of " + label_);
  }
}

double TestFunction::lp_closed(double p) const {
  check_exponent(p);
  double log_norm = std::log(amplitude_) - std::log(std::abs(determinant(map_))) / p;
  for (const Shape& s : shapes_) log_norm += log_shape_norm(s, p);
  return std::exp(log_norm);
}

std::vector<int> TestFunction::factor_blocks() const {
  const int d = dim();
  // Coordinates touched by one shape belong to one factor; union-find over
  // them. Separable shapes only tie the coordinates of each row together.
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    return i;
  };
  for (std::size_t j = 0; j < shapes_.size(); ++j) {
    const bool separable = is_separable(shapes_[j].kind);
    int first = -1;
    for (int r = shape_offset_[j]; r < shape_offset_[j] + shapes_[j].dim; ++r) {
      if (separable) first = -1;
      for (int c = 0; c < d; ++c) {
        if (map_(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) == 0.0) continue;
        if (first < 0) first = c;
        parent[static_cast<std::size_t>(find(c))] = find(first);
      }
    }
  }
  std::vector<int> last(static_cast<std::size_t>(d), 0);
  for (int c = 0; c < d; ++c) last[static_cast<std::size_t>(find(c))] = c;
  std::vector<int> blocks;
  int start = 0;
  while (start < d) {
    int end = start;
    for (int i = start; i <= end; ++i) end = std::max(end, last[static_cast<std::size_t>(find(i))]);
    blocks.push_back(end - start + 1);
    start = end + 1;
  }
  return blocks;
}

bool TestFunction::factorable_over(std::span<const int> block_dims) const {
  const std::vector<int> finest = factor_blocks();
  std::vector<int> cuts;
  int acc = 0;
  for (int b : finest) cuts.push_back(acc += b);
  acc = 0;
  for (int b : block_dims) {
    if (b < 1) return false;
    acc += b;
    if (std::find(cuts.begin(), cuts.end(), acc) == cuts.end()) return false;
  }
  return acc == dim();
}

std::vector<TestFunction> TestFunction::split(std::span<const int> block_dims) const {
  if (!factorable_over(block_dims)) throw DomainError("split: function does not factor over these blocks");
  std::vector<TestFunction> out;
  int start = 0;
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    const int m = block_dims[b];
    std::vector<Shape> shapes;
    std::vector<int> rows;
    for (std::size_t j = 0; j < shapes_.size(); ++j) {
      std::vector<int> mine;
      for (int r = shape_offset_[j]; r < shape_offset_[j] + shapes_[j].dim; ++r) {
        for (int c = start; c < start + m; ++c) {
          if (map_(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) != 0.0) {
            mine.push_back(r);
            break;
          }
        }
      }
      if (mine.empty()) continue;
      Shape part = shapes_[j];
      if (static_cast<int>(mine.size()) != part.dim) {
        if (!is_separable(part.kind)) throw DomainError("split: inconsistent block structure");
        part.dim = static_cast<int>(mine.size());
      }
      shapes.push_back(part);
      rows.insert(rows.end(), mine.begin(), mine.end());
    }
    if (static_cast<int>(rows.size()) != m) throw DomainError("split: inconsistent block structure");
    Matrix sub(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    Vec shift(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const std::size_t r = static_cast<std::size_t>(rows[static_cast<std::size_t>(i)]);
      shift[static_cast<std::size_t>(i)] = shift_[r];
      for (int c = 0; c < m; ++c) sub(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = map_(r, static_cast<std::size_t>(start + c));
    }
    out.emplace_back(std::move(shapes), std::move(sub), std::move(shift), b == 0 ? amplitude_ : 1.0,
                     label_ + "[" + std::to_string(b) + "]");
    start += m;
  }
  return out;
}

std::optional<double> TestFunction::mixed_closed(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != dim()) throw DomainError("mixed_closed: exponent size mismatch");
  for (double v : q) check_exponent(v);
  const std::vector<int> blocks = factor_blocks();
  const std::vector<TestFunction> parts = split(blocks);
  double log_norm = 0.0;
  std::size_t start = 0;
  for (std::size_t b = 0; b < parts.size(); ++b) {
    const TestFunction& part = parts[b];
    const std::size_t m = static_cast<std::size_t>(blocks[b]);
    const std::span<const double> qb = q.subspan(start, m);
    start += m;
    if (std::all_of(qb.begin(), qb.end(), [&](double v) { return v == qb[0]; })) {
      log_norm += std::log(part.lp_closed(qb[0]));
      continue;
    }
    if (part.shapes_.size() != 1) return std::nullopt;
    const ShapeKind kind = part.shapes_[0].kind;
    if (kind != ShapeKind::gaussian && kind != ShapeKind::ball) return std::nullopt;
    const std::vector<Matrix> chain = schur_chain(part.map_.transpose() * part.map_);
    double lp = std::log(part.amplitude_);
    if (kind == ShapeKind::gaussian) {
      for (std::size_t k = 0; k < m; ++k) {
        lp += std::log(std::numbers::pi / (qb[k] * chain[k](0, 0))) / (2.0 * qb[k]);
      }
    } else {
      // Level k integrates (r^2 - D_k t^2)^kappa_k and leaves r^(2 kappa_k + 1).
      double kappa = 0.0;
      double log_c = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double level = log_c + log_beta(0.5, kappa + 1.0) - 0.5 * std::log(chain[k](0, 0));
        if (k + 1 == m) {
          log_c = level / qb[k];
        } else {
          const double r = qb[k + 1] / qb[k];
          log_c = r * level;
          kappa = (kappa + 0.5) * r;
        }
      }
      lp += log_c;
    }
    log_norm += lp;
  }
  return std::exp(log_norm);
}

std::optional<double> TestFunction::weighted_closed(double p, double alpha, WeightNorm norm) const {
  check_exponent(p);
  if (alpha == 0.0) return lp_closed(p);
  if (norm != WeightNorm::euclidean || shapes_.size() != 1) return std::nullopt;
  const Shape& s = shapes_[0];
  if (s.kind != ShapeKind::gaussian && s.kind != ShapeKind::ball && s.kind != ShapeKind::power) {
    return std::nullopt;
  }
  if (std::any_of(shift_.begin(), shift_.end(), [](double v) { return v != 0.0; })) return std::nullopt;
  double lambda = 0.0;
  if (!scalar_map(map_, lambda)) return std::nullopt;
  const double d = dim();
  const double log_surface = std::log(d) + log_ball_volume(dim());
  double log_radial = 0.0;
  switch (s.kind) {
    case ShapeKind::gaussian:
      log_radial = log_gamma(0.5 * (d + alpha)) - std::log(2.0) - 0.5 * (d + alpha) * std::log(p);
      break;
    case ShapeKind::ball:
      log_radial = -std::log(d + alpha);
      break;
    default: {
      const double e = d + alpha - s.gamma * p;
      if (!(e > 0.0)) throw DomainError("weighted_closed: weighted norm diverges");
      log_radial = e * std::log(s.radius) - std::log(e);
    }
  }
  const double log_int = p * std::log(amplitude_) - (d + alpha) * std::log(std::abs(lambda)) +
                         log_surface + log_radial;
  return std::exp(log_int / p);
}

bool TestFunction::quadrature_supported() const {
  std::vector<int> dims;
  for (const Shape& s : shapes_) dims.push_back(s.dim);
  return is_block_diagonal(map_, dims, 0.0);
}

double TestFunction::gaussian_radius2(int block_dim, double q_min) const {
  return (32.0 + block_dim) / q_min;
}

TestFunction::Box TestFunction::bounding_box(double q_min) const {
  const std::size_t d = map_.rows();
  Vec center(d), half(d);
  for (std::size_t j = 0; j < shapes_.size(); ++j) {
    const Shape& s = shapes_[j];
    double c = 0.0, h = 1.0;
    switch (s.kind) {
      case ShapeKind::gaussian: h = std::sqrt(gaussian_radius2(s.dim, q_min)); break;
      case ShapeKind::ball: break;
      case ShapeKind::power: h = s.radius; break;
      case ShapeKind::cube:
      case ShapeKind::simplex: c = 0.5; h = 0.5; break;
    }
    for (int i = 0; i < s.dim; ++i) {
      const std::size_t r = static_cast<std::size_t>(shape_offset_[j] + i);
      center[r] = c + shift_[r];
      half[r] = h;
    }
  }
  const Matrix inv = lu_decompose(map_).inverse();
  const Vec xc = inv * center;
  Box box{Vec(d), Vec(d)};
  for (std::size_t i = 0; i < d; ++i) {
    double w = 0.0;
    for (std::size_t k = 0; k < d; ++k) w += std::abs(inv(i, k)) * half[k];
    box.lo[i] = xc[i] - w;
    box.hi[i] = xc[i] + w;
  }
  return box;
}

SliceGeometry::SliceGeometry(const TestFunction& f, double q_min) {
  if (!f.quadrature_supported()) {
    throw UnsupportedError("nested quadrature needs a map that is block diagonal along the factors");
  }
  int offset = 0;
  for (const Shape& s : f.shapes()) {
    Block b;
    b.offset = offset;
    b.dim = s.dim;
    b.kind = s.kind;
    const std::size_t m = static_cast<std::size_t>(s.dim);
    const Matrix local = f.map().submatrix(static_cast<std::size_t>(offset), static_cast<std::size_t>(offset), m, m);
    const Vec shift(f.shift().begin() + offset, f.shift().begin() + offset + s.dim);
    if (s.kind == ShapeKind::cube || s.kind == ShapeKind::simplex) {
      // Constraints C y <= e on y = M x - s become (C M) x <= e + C s.
      const std::size_t rows = s.kind == ShapeKind::cube ? 2 * m : m + 1;
      Matrix c(rows, m);
      Vec e(rows, 0.0);
      for (std::size_t i = 0; i < m; ++i) c(i, i) = -1.0;
      if (s.kind == ShapeKind::cube) {
        for (std::size_t i = 0; i < m; ++i) {
          c(m + i, i) = 1.0;
          e[m + i] = 1.0;
        }
      } else {
        for (std::size_t i = 0; i < m; ++i) c(m, i) = 1.0;
        e[m] = 1.0;
      }
      b.g = c * local;
      const Vec cs = c * shift;
      b.h.resize(rows);
      for (std::size_t r = 0; r < rows; ++r) b.h[r] = e[r] + cs[r];
    } else {
      b.chain = schur_chain(local.transpose() * local);
      b.center = lu_decompose(local).solve(shift);
      if (s.kind == ShapeKind::gaussian) b.r2 = f.gaussian_radius2(s.dim, q_min);
      else if (s.kind == ShapeKind::power) b.r2 = s.radius * s.radius;
      else b.r2 = 1.0;
    }
    blocks_.push_back(std::move(b));
    for (int i = 0; i < s.dim; ++i) block_of_.push_back(static_cast<int>(blocks_.size()) - 1);
    offset += s.dim;
  }
}

bool SliceGeometry::slice(int k, std::span<const double> x, double& lo, double& hi,
                          std::vector<double>& breaks) const {
  const Block& b = blocks_[static_cast<std::size_t>(block_of_[static_cast<std::size_t>(k)])];
  const int kl = k - b.offset;
  const std::size_t m = static_cast<std::size_t>(b.dim);
  const std::size_t off = static_cast<std::size_t>(b.offset);

  if (b.kind != ShapeKind::cube && b.kind != ShapeKind::simplex) {
    const Matrix& s = b.chain[static_cast<std::size_t>(kl)];
    const std::size_t n = s.rows();
    double u[16];
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(kl) + i;
      u[i] = x[off + idx] - b.center[idx];
    }
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      lin += s(0, i) * u[i];
      for (std::size_t j = 1; j < n; ++j) quad += s(i, j) * u[i] * u[j];
    }
    const double a = s(0, 0);
    const double disc = lin * lin - a * (quad - b.r2);
    if (!(disc > 0.0)) return false;
    const double root = std::sqrt(disc);
    const double c = b.center[static_cast<std::size_t>(kl)];
    lo = c + (-lin - root) / a;
    hi = c + (-lin + root) / a;
    if (b.kind != ShapeKind::ball) breaks.push_back(c - lin / a);
    return lo < hi;
  }

  // Polytope slice: the x_k range of {z : G z <= rhs} is spanned by its
  // vertices, found by solving every square subsystem.
  const std::size_t n = static_cast<std::size_t>(kl) + 1;
  const std::size_t rows = b.g.rows();
  Vec rhs(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = b.h[r];
    for (std::size_t i = n; i < m; ++i) acc -= b.g(r, i) * x[off + i];
    rhs[r] = acc;
  }
  if (n == 1) {
    lo = -kInf;
    hi = kInf;
    for (std::size_t r = 0; r < rows; ++r) {
      const double g = b.g(r, 0);
      if (g > 0.0) hi = std::min(hi, rhs[r] / g);
      else if (g < 0.0) lo = std::max(lo, rhs[r] / g);
      else if (rhs[r] < 0.0) return false;
    }
    return lo < hi;
  }
  bool found = false;
  lo = kInf;
  hi = -kInf;
  Vec z;
  for (unsigned mask = 0; mask < (1u << rows); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
    Matrix sys(n, n);
    Vec r(n);
    std::size_t row = 0;
    for (std::size_t q = 0; q < rows; ++q) {
      if (!(mask & (1u << q))) continue;
      for (std::size_t i = 0; i < n; ++i) sys(row, i) = b.g(q, i);
      r[row++] = rhs[q];
    }
    if (!solve_small(sys, r, z)) continue;
    bool feasible = true;
    for (std::size_t q = 0; q < rows && feasible; ++q) {
      double lhs = 0.0, mag = std::abs(rhs[q]);
      for (std::size_t i = 0; i < n; ++i) {
        lhs += b.g(q, i) * z[i];
        mag += std::abs(b.g(q, i) * z[i]);
      }
      feasible = lhs <= rhs[q] + 1e-10 * (1.0 + mag);
    }
    if (!feasible) continue;
    const double v = z[n - 1];
    found = true;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    breaks.push_back(v);
  }
  return found && lo < hi;
}

}  // namespace gls
