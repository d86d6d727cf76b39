#include "bmo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmo/error.hpp"

namespace bmo {

double omega_tolerance(const OmegaPoint& x) noexcept {
  return 1e-12 * std::max(1.0, std::abs(x.x2));
}

bool in_omega(const OmegaPoint& x, double eps, double tol) {
  if (!(eps > 0.0)) throw DomainError("in_omega: eps must be positive");
  const double lower = x.x1 * x.x1;
  return lower - tol <= x.x2 && x.x2 <= lower + eps * eps + tol;
}

bool in_omega_tol(const OmegaPoint& x, double eps) { return in_omega(x, eps, omega_tolerance(x)); }

Removal select_removable_point(std::span<const double> weights,
                               std::span<const OmegaPoint> points, double eps) {
  const std::size_t n = points.size();
  if (!(eps > 0.0)) throw DomainError("select_removable_point: eps must be positive");
  if (weights.size() != n) throw DomainError("select_removable_point: weights and points differ in length");
  if (n < 2) throw DomainError("select_removable_point: need at least two points");

  double total = 0.0;
  OmegaPoint combination;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(weights[k] > 0.0 && weights[k] < 1.0))
      throw DomainError("select_removable_point: weight " + std::to_string(k) + " not in (0,1)");
    if (!in_omega_tol(points[k], eps))
      throw DomainError("select_removable_point: point " + std::to_string(k) + " outside Omega_eps");
    total += weights[k];
    combination = combination + weights[k] * points[k];
  }
  if (std::abs(total - 1.0) > 1e-12 * static_cast<double>(n))
    throw DomainError("select_removable_point: weights do not sum to 1");
  if (!in_omega_tol(combination, eps))
    throw DomainError("select_removable_point: weighted combination lies outside Omega_eps");

  for (std::size_t j = 0; j < n; ++j) {
    double rest = 0.0;
    OmegaPoint sum;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      rest += weights[k];
      sum = sum + weights[k] * points[k];
    }
    const OmegaPoint r = sum / rest;
    if (in_omega_tol(r, eps)) return {j, r};
  }
  throw InternalError("select_removable_point: no removable point found");
}

SegmentGoodness segment_goodness(const OmegaPoint& p, const OmegaPoint& r, double eps) {
  if (!(eps > 0.0)) throw DomainError("segment_goodness: eps must be positive");
  if (p == r) throw DomainError("segment_goodness: coincident endpoints");
  if (!in_omega_tol(p, eps) || !in_omega_tol(r, eps))
    throw DomainError("segment_goodness: endpoint outside Omega_eps");

  const double d1 = r.x1 - p.x1;
  const double d2 = r.x2 - p.x2;

  SegmentGoodness out;
  out.total_length = std::hypot(d1, d2);

  // eps^2 - q(t) = a t^2 + b t + c, q(t) = x2(t) - x1(t)^2 along the segment.
  // The outside set is where this is negative; c >= 0 and the value at t = 1
  // is >= 0, so it is either empty or an interval inside [0, 1].
  const double a = d1 * d1;
  const double b = 2.0 * p.x1 * d1 - d2;
  const double c = std::max(0.0, eps * eps - p.gap());

  if (a == 0.0) return out;  // vertical: q is affine, never exceeds its endpoint values

  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return out;

  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return out;
  double t1 = q / a;
  double t2 = c / q;
  if (t1 > t2) std::swap(t1, t2);
  t1 = std::max(t1, 0.0);
  t2 = std::min(t2, 1.0);
  if (t2 <= t1) return out;

  out.t_enter = t1;
  out.t_exit = t2;
  out.outside_length = (t2 - t1) * out.total_length;
  out.alpha_max = 1.0 - (t2 - t1);
  return out;
}

}  // namespace bmo
