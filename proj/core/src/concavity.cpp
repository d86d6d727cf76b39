#include "bmo/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bmo/error.hpp"
#include "bmo/jn_bellman.hpp"
#include "bmo/osc_bellman.hpp"
#include "bmo/random.hpp"

namespace bmo {

namespace {

constexpr std::size_t kMaxAttempts = 1000000;

void validate(const CheckConfig& cfg, double max_alpha) {
  if (cfg.samples < 1) throw DomainError("check: samples must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= max_alpha)) throw DomainError("check: alpha out of range");
  if (!(cfg.eps > 0.0 && std::isfinite(cfg.eps))) throw DomainError("check: eps must be positive");
  if (!(cfg.tolerance >= 0.0)) throw DomainError("check: tolerance must be nonnegative");
  if (!(cfg.window >= 0.0)) throw DomainError("check: window must be nonnegative");
}

// Uniform sampler on {|x1| <= W} intersected with Omega_eps. Area measure is
// dx1 d(gap), so drawing x1 and the gap independently is exactly uniform.
class Sampler {
 public:
  Sampler(const CheckConfig& cfg)
      : rng_(cfg.seed),
        eps_(cfg.eps),
        window_(cfg.window > 0.0 ? cfg.window : 3.0 * cfg.eps / std::sqrt(std::min(cfg.alpha, 1.0))) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  OmegaPoint point() { return at(uniform(-window_, window_)); }
  OmegaPoint near(double x1, double radius) { return at(uniform(x1 - radius, x1 + radius)); }
  double window() const { return window_; }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

 private:
  OmegaPoint at(double x1) { return {x1, x1 * x1 + uniform(0.0, eps_ * eps_)}; }

  Rng rng_;
  double eps_;
  double window_;
};

// Positive when F breaks the expected inequality lhs >= rhs (concave) or
// lhs <= rhs (convex).
double shortfall(Shape mode, double lhs, double rhs) { return mode == Shape::kConcave ? rhs - lhs : lhs - rhs; }

void tally(ShapeReport& r, double miss, double tol, const Witness& w) {
  if (miss > tol) ++r.violations;
  if (miss > r.worst_violation) {
    r.worst_violation = miss;
    r.witness = w;
  }
}

void tally(ConditionReport& r, double miss, double tol, const Witness& w) {
  if (miss > tol) ++r.violations;
  if (miss > r.worst_violation) {
    r.worst_violation = miss;
    r.witness = w;
  }
}

}  // namespace

ShapeReport check_alpha_shape(const PlaneFunction& F, Shape mode, const CheckConfig& cfg) {
  validate(cfg, 0.5);
  Sampler s(cfg);
  ShapeReport r;
  r.seed = cfg.seed;
  // Combinations leave Omega_eps unless |x1- - x1+| <= eps / sqrt(beta(1 - beta)).
  const double reach = cfg.eps / std::sqrt(cfg.alpha * (1.0 - cfg.alpha));
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    std::size_t tries = 0;
    for (;;) {
      if (++tries > kMaxAttempts) throw SamplingError("check_alpha_shape: no admissible triple after 10^6 attempts");
      ++r.attempts;
      const double beta = s.uniform(cfg.alpha, 0.5);
      const OmegaPoint xm = s.point();
      const OmegaPoint xp = s.near(xm.x1, reach);
      const OmegaPoint x = beta * xm + (1.0 - beta) * xp;
      if (!in_omega(x, cfg.eps)) continue;
      tally(r, shortfall(mode, F(x), beta * F(xm) + (1.0 - beta) * F(xp)), cfg.tolerance, {beta, xm, xp});
      break;
    }
    ++r.samples;
  }
  return r;
}

ShapeReport check_segment_shape(const PlaneFunction& F, Shape mode, const CheckConfig& cfg) {
  validate(cfg, 1.0);
  Sampler s(cfg);
  ShapeReport r;
  r.seed = cfg.seed;
  const double reach = 2.0 * cfg.eps / std::sqrt(cfg.alpha * (1.0 - std::min(cfg.alpha, 0.5)));
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    std::size_t tries = 0;
    for (;;) {
      if (++tries > kMaxAttempts) throw SamplingError("check_segment_shape: no admissible segment after 10^6 attempts");
      ++r.attempts;
      const OmegaPoint p = s.point();
      const OmegaPoint q = s.near(p.x1, reach);
      if (p == q) continue;
      if (segment_goodness(p, q, cfg.eps).alpha_max < cfg.alpha) continue;
      const double t = s.uniform(0.0, 1.0);
      const OmegaPoint x = (1.0 - t) * p + t * q;
      if (!in_omega(x, cfg.eps)) continue;
      tally(r, shortfall(mode, F(x), (1.0 - t) * F(p) + t * F(q)), cfg.tolerance, {t, p, q});
      break;
    }
    ++r.samples;
  }
  return r;
}

bool SufficientConditionsReport::passed() const noexcept {
  for (const ConditionReport& c : conditions)
    if (c.applicable && c.violations > 0) return false;
  return !direct || direct->passed();
}

SufficientConditionsReport check_sufficient_conditions(BellmanKind kind, const CheckConfig& cfg) {
  validate(cfg, 0.5);
  SufficientConditionsReport out;
  out.kind = kind;
  out.seed = cfg.seed;

  if (kind == BellmanKind::kOscillation) {
    // b is handled directly; the sufficient conditions are not how it is proved.
    for (const char* name : {"local", "boundary_derivatives", "three_point"}) {
      ConditionReport c;
      c.name = name;
      c.applicable = false;
      out.conditions.push_back(c);
    }
    const OscRegions regions = OscRegions::make(cfg.alpha, cfg.eps);
    out.direct = check_alpha_shape([&](const OmegaPoint& x) { return osc_bellman(x, regions); }, Shape::kConvex, cfg);
    return out;
  }

  const JnParams params = solve_delta(cfg.alpha, cfg.eps);
  // The formula extends a little above the upper boundary (up to gap delta^2),
  // which the derivative stencils do not need but rounding may touch.
  auto B = [&](const OmegaPoint& x) { return jn_bellman(x, params); };
  Sampler s(cfg);
  const double eps2 = cfg.eps * cfg.eps;
  const double span = (1.0 - cfg.alpha) * cfg.eps / std::sqrt(cfg.alpha);
  const double a = cfg.alpha;

  ConditionReport local;
  local.name = "local";
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    std::size_t tries = 0;
    for (;;) {
      if (++tries > kMaxAttempts) throw SamplingError("local condition: no chord inside Omega_eps after 10^6 attempts");
      const OmegaPoint p = s.point();
      const OmegaPoint q = s.near(p.x1, 2.0 * cfg.eps);
      if (p == q || segment_goodness(p, q, cfg.eps).outside_length > 0.0) {
        ++local.discarded;
        continue;
      }
      const OmegaPoint m = 0.5 * (p + q);
      tally(local, shortfall(Shape::kConcave, B(m), 0.5 * (B(p) + B(q))), cfg.tolerance, {0.5, p, q});
      break;
    }
    ++local.samples;
  }

  auto upper = [&](double x1) { return OmegaPoint{x1, x1 * x1 + eps2}; };
  // One-sided derivative along u at x, stepping in direction `side` (+1 or -1).
  const double h = 1e-6;
  auto derivative = [&](const OmegaPoint& x, const OmegaPoint& u, double side) {
    const double f0 = B(x);
    const double f1 = B(x + (side * h) * u);
    const double f2 = B(x + (2.0 * side * h) * u);
    return side * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
  };

  ConditionReport deriv;
  deriv.name = "boundary_derivatives";
  ConditionReport three;
  three.name = "three_point";
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    const double p = s.uniform(-s.window(), s.window());
    const double d = s.uniform(0.0, span);
    if (d == 0.0) {
      ++deriv.discarded;
      ++three.discarded;
      continue;
    }
    const double q = s.coin() ? p + d : p - d;
    const OmegaPoint P = upper(p);
    const OmegaPoint Q = upper(q);
    const OmegaPoint v = Q - P;
    const OmegaPoint u = v / std::hypot(v.x1, v.x2);

    // Moving from P against u, and from Q along u, enters Omega_eps.
    const double dp = derivative(P, u, -1.0);
    const double dq = derivative(Q, u, 1.0);
    const double scale = std::max({1.0, std::abs(dp), std::abs(dq)});
    tally(deriv, (dq - dp) / scale, cfg.derivative_tolerance, {0.0, P, Q});
    ++deriv.samples;

    const OmegaPoint S = (P - a * Q) / (1.0 - a);
    if (!in_omega_tol(S, cfg.eps)) {
      ++three.discarded;
      continue;
    }
    tally(three, shortfall(Shape::kConcave, B(P), (1.0 - a) * B(S) + a * B(Q)), cfg.tolerance, {a, P, Q});
    ++three.samples;
  }
  out.conditions = {local, deriv, three};

  // Equality holds for q = p + span; for q = p - span the inequality is strict.
  double slack = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double p = s.uniform(-s.window(), s.window());
    const OmegaPoint P = upper(p);
    const OmegaPoint Q = upper(p + span);
    const OmegaPoint S = (P - a * Q) / (1.0 - a);
    if (!in_omega_tol(S, cfg.eps)) continue;
    slack = std::max(slack, std::abs(B(P) - (1.0 - a) * B(S) - a * B(Q)));
  }
  out.extreme_slack = slack;
  return out;
}

}  // namespace bmo
