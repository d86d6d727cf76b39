#pragma once

#include <cstddef>
#include <span>

namespace bmo {

/// A point of the plane. Bellman points are (mean, mean of squares).
struct OmegaPoint {
  double x1 = 0.0;
  double x2 = 0.0;

  /// Height above the lower parabola x2 = x1^2; the 2-oscillation for
  /// Bellman points.
  double gap() const noexcept { return x2 - x1 * x1; }

  bool operator==(const OmegaPoint&) const = default;

  friend OmegaPoint operator+(OmegaPoint a, OmegaPoint b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend OmegaPoint operator-(OmegaPoint a, OmegaPoint b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend OmegaPoint operator*(double s, OmegaPoint a) { return {s * a.x1, s * a.x2}; }
  friend OmegaPoint operator/(OmegaPoint a, double s) { return {a.x1 / s, a.x2 / s}; }
};

/// Membership tolerance used by all domain checks: 1e-12, scaled by |x2|
/// once points move away from the origin.
double omega_tolerance(const OmegaPoint& x) noexcept;

/// Strip Omega_eps = {x1^2 <= x2 <= x1^2 + eps^2}, widened by `tol`.
bool in_omega(const OmegaPoint& x, double eps, double tol = 0.0);

/// Same as in_omega with omega_tolerance(x).
bool in_omega_tol(const OmegaPoint& x, double eps);

struct Removal {
  std::size_t index;
  /// Normalized combination of all the other points.
  OmegaPoint remainder;
};

/// Given convex weights and points of Omega_eps whose combination lies in
/// Omega_eps, finds the smallest index j such that removing P_j leaves the
/// renormalized combination of the remaining points inside Omega_eps.
///
/// Such an index always exists. Throws DomainError on violated
/// preconditions and InternalError if no index qualifies.
Removal select_removable_point(std::span<const double> weights,
                               std::span<const OmegaPoint> points, double eps);

struct SegmentGoodness {
  double total_length = 0.0;
  double outside_length = 0.0;
  /// 1 - (fraction of the segment above the upper parabola).
  double alpha_max = 1.0;
  /// Parameter interval (t_enter, t_exit) of the outside part, empty when
  /// t_enter == t_exit.
  double t_enter = 0.0;
  double t_exit = 0.0;
};

/// Portion of the segment [p, r] lying outside Omega_eps. The segment is
/// alpha-good for every alpha <= alpha_max.
SegmentGoodness segment_goodness(const OmegaPoint& p, const OmegaPoint& r, double eps);

}  // namespace bmo
