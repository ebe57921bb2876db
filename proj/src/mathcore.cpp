#include "gls/mathcore.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gls/error.hpp"

namespace gls {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Stirling series is more accurate than Lanczos once x is moderately large.
double log_gamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 -
                             inv2 * (1.0 / 1680.0 -
                                     inv2 * (1.0 / 1188.0 - inv2 * (691.0 / 360360.0))))));
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double log_gamma_lanczos(double x) {
  // x >= 0.5
  const double z = x - 1.0;
  double sum = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  }
  if (x < 0.5) {
    return log_gamma_lanczos(x + 1.0) - std::log(x);
  }
  if (x >= 15.0) {
    return log_gamma_stirling(x);
  }
  return log_gamma_lanczos(x);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

double log_ball_volume(int d) {
  if (d < 1) {
    throw DomainError("ball_volume: dimension must be >= 1");
  }
  const double half = 0.5 * d;
  return half * std::log(std::numbers::pi) - log_gamma(half + 1.0);
}

double ball_volume(int d) { return std::exp(log_ball_volume(d)); }

double find_root_increasing(const std::function<double(double)>& g, double lo, double hi,
                            double tol) {
  if (!(lo < hi)) {
    throw BracketError("find_root_increasing: empty bracket");
  }
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (std::isnan(g_lo) || std::isnan(g_hi) || (g_lo > 0.0) == (g_hi > 0.0)) {
    throw BracketError("find_root_increasing: no sign change on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gls
