#pragma once

#include <functional>

namespace gls {

/// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 terms); small
/// arguments are shifted up by one with the recurrence Gamma(x+1) = x Gamma(x).
double log_gamma(double x);

/// ln B(a, b), computed in log space so large arguments do not overflow.
double log_beta(double a, double b);

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta(double a, double b);

/// Volume of the Euclidean unit ball in R^d: pi^(d/2) / Gamma(d/2 + 1).
double ball_volume(int d);
double log_ball_volume(int d);

/// Bisection root of a continuous monotone g on [lo, hi]. Requires a sign
/// change; stops once the bracket is narrower than tol (or cannot shrink
/// further in floating point) and returns the bracket midpoint.
double find_root_increasing(const std::function<double(double)>& g, double lo, double hi,
                            double tol);

}  // namespace gls
