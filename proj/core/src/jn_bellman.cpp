#include "bmo/jn_bellman.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmo/error.hpp"

namespace bmo {

namespace {

void require_tree_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError(std::string(who) + ": alpha must lie in (0, 1/2]");
}

// e^x - 1 - x - x^2/2 and log(1 - x) + x + x^2/2, summed as series near 0
// where the closed forms cancel.
double exp_tail3(double x) {
  if (std::abs(x) > 0.25) return std::expm1(x) - x - 0.5 * x * x;
  double term = x * x * x / 6.0, sum = 0.0;
  for (int k = 4; sum + term != sum; ++k) {
    sum += term;
    term *= x / k;
  }
  return sum;
}

double log_tail3(double x) {
  if (std::abs(x) > 0.25) return std::log1p(-x) + x + 0.5 * x * x;
  double power = x * x * x, sum = 0.0;
  for (int k = 3; sum - power / k != sum; ++k) {
    sum -= power / k;
    power *= x;
  }
  return sum;
}

// log(1 + u) - u
double log1p_tail2(double u) {
  if (std::abs(u) > 0.25) return std::log1p(u) - u;
  double power = u * u, sum = 0.0;
  for (int k = 2; sum + power / k != sum; ++k) {
    sum += (k % 2 == 0 ? -power : power) / k;
    power *= u;
  }
  return sum;
}

// The delta equation in logarithmic form,
//   log[(1 - m) e^{m - delta} / ((1 - delta) K)],
// with the terms through second order cancelled analytically: both sides
// equal 1 + eps^2/2 up to O(eps^3), so the naive form loses the root for
// small eps.
struct LogResidual {
  double c = 0.0;  // log K - eps^2/2
  double eps = 0.0;

  LogResidual(double alpha, double e) : eps(e) {
    const double s = std::sqrt(alpha);
    // K = 1/(1 + u), u = -eps^2/2 + v
    const double v = (exp_tail3(s * e) - alpha * exp_tail3(e / s)) / (1.0 - alpha);
    const double u = v - 0.5 * e * e;
    c = -log1p_tail2(u) - v;
  }

  double operator()(double delta) const {
    const double m = std::sqrt((delta - eps) * (delta + eps));
    return log_tail3(m) - log_tail3(delta) - c;
  }
};

}  // namespace

double jn_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("jn_threshold: alpha must lie in (0, 1]");
  if (alpha == 1.0) return 1.0;
  return std::sqrt(alpha) * -std::log1p(alpha - 1.0) / (1.0 - alpha);
}

double jn_constant(double alpha, double eps) {
  require_tree_alpha(alpha, "jn_constant");
  if (!(eps >= 0.0)) throw DomainError("jn_constant: eps must be nonnegative");
  const double threshold = jn_threshold(alpha);
  if (eps >= threshold)
    throw ThresholdError("jn_constant: eps is beyond the John-Nirenberg threshold", threshold);
  const double s = std::sqrt(alpha);
  // e^{s eps} - a e^{eps/s}, written to keep the leading 1 - a exact.
  const double denom = (1.0 - alpha) + std::expm1(s * eps) - alpha * std::expm1(eps / s);
  if (!(denom > 0.0))
    throw ThresholdError("jn_constant: eps is beyond the John-Nirenberg threshold", threshold);
  return (1.0 - alpha) / denom;
}

double delta_equation(double alpha, double delta, double eps) {
  if (!(eps >= 0.0)) throw DomainError("delta_equation: eps must be nonnegative");
  if (!(delta >= eps && delta < 1.0)) throw DomainError("delta_equation: need eps <= delta < 1");
  const double K = jn_constant(alpha, eps);
  if (eps == 0.0) return 0.0;
  return K * std::expm1(LogResidual(alpha, eps)(delta));
}

JnParams solve_delta(double alpha, double eps) {
  require_tree_alpha(alpha, "solve_delta");
  const double threshold = jn_threshold(alpha);
  if (!(eps > 0.0)) throw DomainError("solve_delta: eps must be positive");
  if (eps >= threshold)
    throw ThresholdError("solve_delta: eps is beyond the John-Nirenberg threshold", threshold);

  jn_constant(alpha, eps);  // rejects eps past the point where K blows up
  const LogResidual g(alpha, eps);

  const double top = std::min(1.0 - 1e-15, (1.0 + alpha) * eps / (2.0 * std::sqrt(alpha)));
  double lo = eps;
  double hi = top;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  // Both endpoints bracket the root to within an ulp; keep the one that is
  // strictly inside the open interval (eps, top).
  double delta = lo;
  if (lo == eps || (hi != top && std::abs(g(hi)) < std::abs(g(lo)))) delta = hi;
  if (!(delta > eps && delta < top)) throw InternalError("solve_delta: root left its bracket");

  return {alpha, eps, delta, std::sqrt((delta - eps) * (delta + eps))};
}

double jn_bellman(const OmegaPoint& x, const JnParams& p) {
  if (!in_omega_tol(x, p.eps)) throw DomainError("jn_bellman: point outside Omega_eps");
  double radicand = p.delta * p.delta - x.gap();
  if (radicand < 0.0) radicand = 0.0;
  const double r = std::sqrt(radicand);
  return std::exp(x.x1 + r - p.delta) * (1.0 - r) / (1.0 - p.delta);
}

double DyadicConstants::C(double eps) const { return jn_constant(alpha, eps); }

DyadicConstants dyadic_constants(int n) {
  if (n < 1 || n > 60) throw DomainError("dyadic_constants: dimension must be in [1, 60]");
  const double two_n = std::ldexp(1.0, n);
  DyadicConstants c;
  c.n = n;
  c.alpha = 1.0 / two_n;
  c.eps0 = std::pow(2.0, 0.5 * n) / (two_n - 1.0) * n * std::numbers::ln2;
  return c;
}

ExtendedReal dyadic_jn_bellman(const OmegaPoint& x, int n, double eps) {
  if (!(eps > 0.0)) throw DomainError("dyadic_jn_bellman: eps must be positive");
  if (!in_omega_tol(x, eps)) throw DomainError("dyadic_jn_bellman: point outside Omega_eps");
  const DyadicConstants c = dyadic_constants(n);
  if (eps < c.eps0) {
    try {
      return ExtendedReal::finite(jn_bellman(x, solve_delta(c.alpha, eps)));
    } catch (const ThresholdError&) {
      // eps within rounding of the threshold: divergent regime
    }
  }
  if (std::abs(x.gap()) <= omega_tolerance(x)) return ExtendedReal::finite(std::exp(x.x1));
  return ExtendedReal::infinity();
}

}  // namespace bmo
