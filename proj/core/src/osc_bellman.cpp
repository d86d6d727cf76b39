#include "bmo/osc_bellman.hpp"

#include <cmath>

#include "bmo/error.hpp"

namespace bmo {

OscRegions OscRegions::make(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("OscRegions: alpha must lie in (0, 1/2]");
  if (!(eps > 0.0 && std::isfinite(eps))) throw DomainError("OscRegions: eps must be positive");
  return {alpha, eps, (1.0 + alpha) * eps / std::sqrt(alpha)};
}

RegionInfo classify(const OmegaPoint& x, const OscRegions& g) {
  if (!in_omega_tol(x, g.eps)) throw DomainError("classify: point outside Omega_eps");
  const double ax = std::abs(x.x1);
  const bool above_rays = x.x2 >= g.slope * ax;
  RegionInfo info;
  // The rays meet the upper boundary at |x1| = sqrt(a) eps and eps / sqrt(a);
  // only the central piece of the set above them belongs to Omega0.
  if (above_rays && ax <= std::sqrt(g.alpha) * g.eps) info.region = OscRegion::kOmega0;
  info.in_omega2 = info.region == OscRegion::kOmega0 || x.x2 <= g.slope * ax;
  return info;
}

double osc_bellman(const OmegaPoint& x, const OscRegions& g) {
  if (classify(x, g).region == OscRegion::kOmega0) return std::sqrt(g.alpha) * x.x2 / ((1.0 + g.alpha) * g.eps);
  return std::abs(x.x1);
}

double osc_lower_bound(double delta2, double alpha, double eps) {
  if (!(eps > 0.0)) throw DomainError("osc_lower_bound: eps must be positive");
  if (!(delta2 >= 0.0)) throw DomainError("osc_lower_bound: delta2 must be nonnegative");
  return std::sqrt(alpha) / ((1.0 + alpha) * eps) * delta2;
}

}  // namespace bmo
