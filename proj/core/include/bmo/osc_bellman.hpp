#pragma once

#include "bmo/geometry.hpp"

namespace bmo {

/// Region decomposition of Omega_eps used by the oscillation Bellman function.
///
/// Omega0 is the curvilinear triangle cut from Omega_eps by the rays
/// x2 = slope |x1| (it touches the upper boundary for |x1| <= sqrt(a) eps);
/// Omega1 is the rest. Omega2 adds to Omega0 everything below the rays.
struct OscRegions {
  double alpha = 0.5;
  double eps = 1.0;
  double slope = 0.0;  // (1 + a) eps / sqrt(a)

  static OscRegions make(double alpha, double eps);
};

enum class OscRegion { kOmega0, kOmega1 };

struct RegionInfo {
  OscRegion region = OscRegion::kOmega1;
  bool in_omega2 = false;
};

/// Points on the separating rays belong to Omega0; b agrees on both sides.
RegionInfo classify(const OmegaPoint& x, const OscRegions& regions);

/// b(x) = sqrt(a) x2 / ((1 + a) eps) on Omega0 and |x1| on Omega1.
double osc_bellman(const OmegaPoint& x, const OscRegions& regions);

/// sqrt(a) / ((1 + a) eps) * delta2: lower bound for the 1-oscillation of a
/// function with BMO norm at most eps and 2-oscillation delta2.
double osc_lower_bound(double delta2, double alpha, double eps);

}  // namespace bmo
