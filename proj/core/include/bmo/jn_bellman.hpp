#pragma once

#include "bmo/geometry.hpp"
#include "bmo/types.hpp"

namespace bmo {

/// Largest admissible BMO norm for the integral John–Nirenberg inequality on
/// alpha-trees: sqrt(a) log(1/a) / (1 - a); equals 1 at alpha = 1.
double jn_threshold(double alpha);

/// Sharp multiplicative constant (1 - a) / (e^{sqrt(a) eps} - a e^{eps/sqrt(a)})
/// for 0 <= eps < jn_threshold(alpha), alpha in (0, 1/2]. Throws
/// ThresholdError when the denominator is not positive.
double jn_constant(double alpha, double eps);

/// The equation whose root in delta selects the Bellman function:
///   (1 - m) / (1 - delta) e^{m - delta} - K(alpha, eps),  m = sqrt(delta^2 - eps^2).
/// Requires eps <= delta < 1.
double delta_equation(double alpha, double delta, double eps);

/// Parameters of the John–Nirenberg Bellman function.
struct JnParams {
  double alpha = 0.5;
  double eps = 0.0;
  double delta = 0.0;  // root of delta_equation
  double mu = 0.0;     // sqrt(delta^2 - eps^2): value of r on the upper boundary
};

/// Root of delta_equation on (eps, min{1, (1 + a) eps / (2 sqrt a)}), found
/// by bisection down to floating-point resolution.
JnParams solve_delta(double alpha, double eps);

/// B(x) = e^{-delta} / (1 - delta) * e^{x1 + r} (1 - r),  r = sqrt(delta^2 - x2 + x1^2).
/// Throws DomainError for x outside Omega_eps.
double jn_bellman(const OmegaPoint& x, const JnParams& params);

/// Constants for the dyadic lattice of R^n, alpha = 2^-n.
struct DyadicConstants {
  int n = 1;
  double alpha = 0.5;
  double eps0 = 0.0;  // 2^{n/2} / (2^n - 1) * n * log 2

  /// Sharp constant C(eps, n) = (2^n - 1) / (2^n e^{2^{-n/2} eps} - e^{2^{n/2} eps}).
  double C(double eps) const;
};

DyadicConstants dyadic_constants(int n);

/// Exact Bellman function of the integral John–Nirenberg inequality for the
/// dyadic BMO on R^n. Infinite off the lower boundary once eps reaches the
/// dyadic threshold.
ExtendedReal dyadic_jn_bellman(const OmegaPoint& x, int n, double eps);

}  // namespace bmo
