#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bmo/geometry.hpp"
#include "bmo/tree.hpp"
#include "bmo/types.hpp"

namespace bmo {

/// Nested description of a binary martingale, as read from JSON.
struct MartingaleSpec {
  double measure = 0.0;
  OmegaPoint point;
  std::vector<MartingaleSpec> children;  // none or two
};

struct MartingaleNode {
  double measure = 0.0;
  OmegaPoint point;
  std::optional<std::pair<std::size_t, std::size_t>> children;  // (J-, J+)
  std::size_t depth = 0;
};

/// Binary splitting tree J = J- u J+ with a point of Omega_eps at every
/// node and |J| x_J = |J-| x_J- + |J+| x_J+. Node 0 is the root.
class BinaryMartingale {
 public:
  /// Throws StructureError, naming the node by its path from the root
  /// ("root", "root.-", "root.-.+", ...), on any violated invariant.
  BinaryMartingale(std::vector<MartingaleNode> nodes, double eps);
  static BinaryMartingale from_spec(const MartingaleSpec& root, double eps);

  double eps() const noexcept { return eps_; }
  const std::vector<MartingaleNode>& nodes() const noexcept { return nodes_; }
  const MartingaleNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t depth() const noexcept { return depth_; }
  std::string path(std::size_t i) const;

 private:
  std::vector<MartingaleNode> nodes_;
  std::vector<std::size_t> parent_;
  double eps_;
  std::size_t depth_ = 0;
};

struct GoodnessReport {
  /// Largest alpha for which the chord [x_J-, x_J+] is alpha-good; 1 for
  /// leaves and for coinciding children.
  std::vector<double> alpha_max;
  double overall = 1.0;
  std::size_t worst_node = 0;
};

/// The martingale is an (alpha, eps)-martingale for every alpha <= overall.
GoodnessReport martingale_goodness(const BinaryMartingale& m);

enum class SquareStrategy { kQuarters, kHalves };

struct SquareExample {
  BinaryMartingale martingale;
  double overall_alpha = 0.0;
};

/// The function on the unit square that is 0 on two quarters and +-sqrt 2 on
/// the other two (norm 1, eps = 1), split either one quarter at a time or
/// into two halves each holding a zero quarter.
SquareExample square_example(SquareStrategy strategy);

struct JensenTrace {
  /// S_k = (1/|Q|) sum of |J| F(x_J) over the nodes of level k, leaves
  /// above level k included.
  std::vector<double> level_sums;
  std::optional<std::size_t> violating_level;
  double excess = 0.0;

  bool holds() const noexcept { return !violating_level.has_value(); }
};

/// Level sums of F along the martingale; in concave mode they must not
/// increase (reversed for convex). Requires the martingale's goodness to be
/// at least alpha; F is expected to be alpha-concave (convex).
JensenTrace jensen_fold(const BinaryMartingale& m, const PlaneFunction& F, Shape mode, double alpha);

/// Binary martingale generated by a tree-simple function: every node of
/// the tree is split pairwise by decompose_children.
BinaryMartingale generate_martingale(const SimpleFunction& phi, double eps);

struct Alpha0Bound {
  double alpha0_lower = 0.0;
  double eps0_lower = 0.0;
};

/// Guaranteed lower bounds 2^{-n} and jn_threshold(2^{-n}) for the best
/// martingale parameter in dimension n; (1, 1) on the line.
Alpha0Bound alpha0_bound(int n);

}  // namespace bmo
