#include "bmo/induction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bmo/error.hpp"
#include "bmo/jn_bellman.hpp"
#include "bmo/osc_bellman.hpp"

namespace bmo {

namespace {

// Signed amount by which `later` breaks the expected order relative to
// `earlier`: positive means a violation.
double excess(Shape mode, double earlier, double later) {
  return mode == Shape::kConcave ? later - earlier : earlier - later;
}

void require_norm(const SimpleFunction& phi, double eps, const BmoNorms& norms, const char* who) {
  if (norms.norm2 > eps * (1.0 + 1e-12) + 1e-15)
    throw DomainError(std::string(who) + ": BMO norm of phi exceeds eps");
  (void)phi;
}

void require_admissible(const SimpleFunction& phi, double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError(std::string(who) + ": alpha must lie in (0, 1/2]");
  if (max_admissible_alpha(phi.tree()) < alpha * (1.0 - 1e-12))
    throw DomainError(std::string(who) + ": tree is not an alpha-tree for this alpha");
}

}  // namespace

std::vector<Split> decompose_children(const SimpleFunction& phi, std::span<const OmegaPoint> points,
                                      NodeId parent, double eps) {
  const AlphaTree& t = phi.tree();
  if (parent >= t.size() || t.node_depth(parent) >= phi.depth())
    throw DomainError("decompose_children: node has no children above the function's generation");
  if (points.size() <= t.children(parent).back())
    throw DomainError("decompose_children: point table does not cover the children");

  std::vector<NodeId> rest;
  for (NodeId c : t.children(parent)) rest.push_back(c);
  double mass = t.measure(parent);
  OmegaPoint current = points[parent];

  std::vector<Split> splits;
  std::vector<double> w;
  std::vector<OmegaPoint> p;
  while (rest.size() >= 2) {
    w.clear();
    p.clear();
    for (NodeId c : rest) {
      w.push_back(t.measure(c) / mass);
      p.push_back(points[c]);
    }
    const Removal r = select_removable_point(w, p, eps);
    const NodeId child = rest[r.index];

    Split s;
    s.beta = w[r.index];
    s.minus = p[r.index];
    s.plus = r.remainder;
    s.combined = current;
    s.removed_child = child;
    if (s.beta > 0.5) {
      s.beta = 1.0 - s.beta;
      std::swap(s.minus, s.plus);
      s.swapped = true;
    }
    splits.push_back(s);

    mass -= t.measure(child);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(r.index));
    current = r.remainder;
  }
  return splits;
}

std::vector<Split> decompose_children(const SimpleFunction& phi, NodeId parent, double eps) {
  const std::vector<OmegaPoint> pts = node_points(phi);
  return decompose_children(phi, pts, parent, eps);
}

InductionTrace bellman_fold(const SimpleFunction& phi, const PlaneFunction& F, Shape mode, double eps) {
  const AlphaTree& t = phi.tree();
  const std::vector<OmegaPoint> pts = node_points(phi);
  std::vector<double> val(pts.size());
  for (NodeId id = 0; id < pts.size(); ++id) val[id] = F(pts[id]);

  InductionTrace tr;
  tr.mode = mode;
  const double total = t.measure(t.root());
  for (std::size_t m = 0; m <= phi.depth(); ++m) {
    double s = 0.0;
    for (NodeId id : t.generation(m)) s += t.measure(id) * val[id];
    tr.sums.push_back(s / total);
  }
  tr.final_integral = tr.sums.back();

  auto record = [&](ChainViolation v) {
    if (v.excess > kChainSlack && !tr.violation) tr.violation = v;
  };

  // Two-point steps and parent/children steps, node by node.
  for (std::size_t m = 0; m < phi.depth() && !tr.violation; ++m) {
    for (NodeId id : t.generation(m)) {
      for (const Split& s : decompose_children(phi, pts, id, eps)) {
        const double rhs = s.beta * F(s.minus) + (1.0 - s.beta) * F(s.plus);
        record({id, s, m, excess(mode, F(s.combined), rhs)});
      }
      double avg = 0.0;
      for (NodeId c : t.children(id)) avg += t.measure(c) * val[c];
      record({id, std::nullopt, m, excess(mode, val[id], avg / t.measure(id))});
      if (tr.violation) break;
    }
  }
  // Generation sums.
  for (std::size_t m = 0; m + 1 < tr.sums.size(); ++m)
    record({t.root(), std::nullopt, m + 1, excess(mode, tr.sums[m], tr.sums[m + 1])});
  return tr;
}

JnVerification verify_jn(const SimpleFunction& phi, double alpha, double eps) {
  require_admissible(phi, alpha, "verify_jn");
  const double K = jn_constant(alpha, eps);  // throws beyond the threshold
  const BmoNorms norms = bmo_norms(phi);
  require_norm(phi, eps, norms, "verify_jn");

  const std::vector<double> e = node_averages(phi, [](double v) { return std::exp(v); });
  JnVerification out;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (NodeId id = 0; id < e.size(); ++id) {
    const double d = e[id] - K * std::exp(norms.reports[id].mean);
    if (d > out.worst_excess) {
      out.worst_excess = d;
      out.worst_node = id;
    }
  }
  out.lhs = e[0];
  out.rhs = K * std::exp(norms.reports[0].mean);
  out.holds = out.worst_excess <= kChainSlack;

  if (eps > 0.0) {
    const JnParams params = solve_delta(alpha, eps);
    out.chain = bellman_fold(phi, [&](const OmegaPoint& x) { return jn_bellman(x, params); }, Shape::kConcave, eps);
  } else {
    out.chain.sums.assign(phi.depth() + 1, out.lhs);
    out.chain.final_integral = out.lhs;
  }
  return out;
}

OscVerification verify_osc(const SimpleFunction& phi, double alpha, double eps) {
  require_admissible(phi, alpha, "verify_osc");
  if (!(eps >= 0.0)) throw DomainError("verify_osc: eps must be nonnegative");
  BmoNorms norms = bmo_norms(phi);
  OscVerification out;
  if (eps == 0.0) {
    if (norms.norm2 > 0.0) throw DomainError("verify_osc: eps = 0 but phi is not constant");
    out.holds = true;
    out.bounds.assign(norms.reports.size(), 0.0);
    out.reports = std::move(norms.reports);
    return out;
  }
  require_norm(phi, eps, norms, "verify_osc");

  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (const OscillationReport& r : norms.reports) {
    const double bound = osc_lower_bound(r.delta2, alpha, eps);
    out.bounds.push_back(bound);
    const double d = bound - r.delta1;
    if (d > out.worst_excess) {
      out.worst_excess = d;
      out.worst_node = r.node;
    }
    if (r.delta1 > 0.0) out.worst_ratio = std::max(out.worst_ratio, bound / r.delta1);
  }
  out.holds = out.worst_excess <= kChainSlack;
  out.reports = std::move(norms.reports);

  const OscRegions regions = OscRegions::make(alpha, eps);
  out.chain = bellman_fold(phi, [&](const OmegaPoint& x) { return osc_bellman(x, regions); }, Shape::kConvex, eps);
  return out;
}

}  // namespace bmo
