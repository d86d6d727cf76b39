#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bmo/geometry.hpp"
#include "bmo/tree.hpp"
#include "bmo/types.hpp"

namespace bmo {

/// One two-point step x = beta * minus + (1 - beta) * plus of the
/// decomposition of a node's Bellman point, normalized to beta <= 1/2.
struct Split {
  double beta = 0.5;
  OmegaPoint minus;
  OmegaPoint plus;
  OmegaPoint combined;
  NodeId removed_child = 0;
  /// True when the removed child is the `plus` point (its weight was above 1/2).
  bool swapped = false;
};

/// Rebuilds the parent's Bellman point from its children's points by
/// repeatedly splitting off a child whose removal keeps the rest inside
/// Omega_eps. A single child yields no splits. Every beta lies in
/// [alpha, 1/2] for the tree's alpha.
std::vector<Split> decompose_children(const SimpleFunction& phi, NodeId parent, double eps);
/// Same, with node points precomputed by node_points(phi).
std::vector<Split> decompose_children(const SimpleFunction& phi, std::span<const OmegaPoint> points,
                                      NodeId parent, double eps);

/// First place where the fold of a non-alpha-concave (or convex) function
/// breaks monotonicity.
struct ChainViolation {
  NodeId node = 0;
  std::optional<Split> split;  // empty for a node-level or generation-level failure
  std::size_t generation = 0;
  double excess = 0.0;
};

struct InductionTrace {
  Shape mode = Shape::kConcave;
  /// S_m = (1/mu_X) sum over generation m of mu_J F(P_J), m = 0..N.
  std::vector<double> sums;
  double final_integral = 0.0;
  std::optional<ChainViolation> violation;

  bool monotone() const noexcept { return !violation.has_value(); }
};

inline constexpr double kChainSlack = 1e-9;

/// Folds F over the generations of phi's tree. In concave mode
/// S_0 >= S_1 >= ... >= S_N is expected, together with every two-point
/// split and every parent/children step; convex mode reverses all of them.
/// A failure is reported in the trace rather than thrown.
InductionTrace bellman_fold(const SimpleFunction& phi, const PlaneFunction& F, Shape mode, double eps);

struct JnVerification {
  double lhs = 0.0;  // <e^phi>_X
  double rhs = 0.0;  // K e^{<phi>_X}
  bool holds = false;  // at the root and at every other node
  NodeId worst_node = 0;
  double worst_excess = 0.0;  // max over nodes of lhs_J - rhs_J
  InductionTrace chain;  // fold of the Bellman function
};

/// Checks <e^phi>_J <= K(alpha, eps) e^{<phi>_J} at every node, and the
/// monotone Bellman chain at the root. Requires ||phi|| <= eps < eps0(alpha)
/// and a tree admissible for alpha.
JnVerification verify_jn(const SimpleFunction& phi, double alpha, double eps);

struct OscVerification {
  bool holds = false;
  NodeId worst_node = 0;
  /// max over nodes with positive delta1 of bound / delta1 (0 if none).
  double worst_ratio = 0.0;
  /// max over nodes of bound - delta1.
  double worst_excess = 0.0;
  std::vector<OscillationReport> reports;
  std::vector<double> bounds;  // per node, same order as reports
  std::optional<InductionTrace> chain;  // fold of b; absent for eps = 0
};

/// Checks delta1_J >= sqrt(a) / ((1 + a) eps) delta2_J at every node.
/// eps = 0 is accepted for constant phi only.
OscVerification verify_osc(const SimpleFunction& phi, double alpha, double eps);

}  // namespace bmo
