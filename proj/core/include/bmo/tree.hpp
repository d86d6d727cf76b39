#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <iterator>
#include <span>
#include <vector>

#include "bmo/geometry.hpp"

namespace bmo {

using NodeId = std::size_t;

/// Contiguous run of node ids [first, last).
class NodeRange {
 public:
  class iterator {
   public:
    using iterator_category = std::random_access_iterator_tag;
    using value_type = NodeId;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = NodeId;

    iterator() = default;
    explicit iterator(NodeId i) : i_(i) {}
    NodeId operator*() const { return i_; }
    NodeId operator[](difference_type k) const { return i_ + static_cast<NodeId>(k); }
    iterator& operator++() { ++i_; return *this; }
    iterator operator++(int) { iterator t = *this; ++i_; return t; }
    iterator& operator--() { --i_; return *this; }
    iterator operator--(int) { iterator t = *this; --i_; return t; }
    iterator& operator+=(difference_type k) { i_ += static_cast<NodeId>(k); return *this; }
    iterator& operator-=(difference_type k) { i_ -= static_cast<NodeId>(k); return *this; }
    friend iterator operator+(iterator a, difference_type k) { return a += k; }
    friend iterator operator+(difference_type k, iterator a) { return a += k; }
    friend iterator operator-(iterator a, difference_type k) { return a -= k; }
    friend difference_type operator-(iterator a, iterator b) {
      return static_cast<difference_type>(a.i_) - static_cast<difference_type>(b.i_);
    }
    friend auto operator<=>(iterator a, iterator b) = default;

   private:
    NodeId i_ = 0;
  };

  NodeRange() = default;
  NodeRange(NodeId first, NodeId last) : first_(first), last_(last) {}

  iterator begin() const { return iterator(first_); }
  iterator end() const { return iterator(last_); }
  std::size_t size() const { return last_ - first_; }
  bool empty() const { return first_ == last_; }
  NodeId front() const { return first_; }
  NodeId back() const { return last_ - 1; }
  NodeId operator[](std::size_t k) const { return first_ + k; }

 private:
  NodeId first_ = 0;
  NodeId last_ = 0;
};

/// Nested description of a measure tree, as read from JSON or produced by
/// constructors. `value` is set only on the nodes of the generation where a
/// simple function is defined.
struct NodeSpec {
  double measure = 0.0;
  std::optional<double> value;
  std::vector<NodeSpec> children;
};

/// Finite alpha-tree on an abstract measure space.
///
/// Nodes are numbered breadth-first from the root (id 0), so every
/// generation, the children of a node, and the generation-m descendants of
/// a node all occupy contiguous id ranges. All leaves sit in the deepest
/// generation. Immutable after construction.
class AlphaTree {
 public:
  /// Validates the structure and the alpha condition. Throws StructureError
  /// naming the offending node, DomainError for alpha outside (0, 1/2].
  static std::shared_ptr<const AlphaTree> build(const NodeSpec& root, double alpha);

  double alpha() const noexcept { return alpha_; }
  NodeId root() const noexcept { return 0; }
  std::size_t size() const noexcept { return measure_.size(); }
  /// Index of the deepest generation.
  std::size_t depth() const noexcept { return gen_start_.size() - 2; }

  double measure(NodeId id) const { return measure_.at(id); }
  std::size_t node_depth(NodeId id) const { return depth_.at(id); }
  std::optional<NodeId> parent(NodeId id) const;
  NodeRange children(NodeId id) const;
  NodeRange generation(std::size_t m) const;
  /// Generation-m descendants of `id`; requires node_depth(id) <= m <= depth().
  NodeRange descendants(NodeId id, std::size_t m) const;

 private:
  AlphaTree() = default;

  double alpha_ = 0.5;
  std::vector<double> measure_;
  std::vector<std::size_t> depth_;
  std::vector<NodeId> parent_;
  std::vector<NodeId> first_child_;
  std::vector<std::size_t> child_count_;
  std::vector<NodeId> gen_start_;  // generation m is [gen_start_[m], gen_start_[m+1])
};

using TreePtr = std::shared_ptr<const AlphaTree>;

/// Homogeneous tree in which every node has 2^n children of equal measure
/// (the dyadic cubes of R^n), alpha = 2^-n.
TreePtr build_dyadic_tree(int n, int depth, double root_measure = 1.0);

/// Minimum child/parent measure ratio over all edges; 1 for a tree without
/// edges. Throws StructureError if the spec is not a well-formed measure tree.
double max_admissible_alpha(const NodeSpec& root);
double max_admissible_alpha(const AlphaTree& tree);

/// Function constant on every node of generation `depth` of a tree.
class SimpleFunction {
 public:
  /// `values` are listed in generation order (id - first id of the generation).
  SimpleFunction(TreePtr tree, std::size_t depth, std::vector<double> values);

  const AlphaTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  std::size_t depth() const noexcept { return depth_; }
  std::span<const double> values() const noexcept { return values_; }
  /// Value on a generation-`depth` node.
  double value(NodeId id) const;

  SimpleFunction affine(double scale, double shift) const;

 private:
  TreePtr tree_;
  std::size_t depth_;
  std::vector<double> values_;
};

/// Reads the values stored on one generation of `spec`, which must describe
/// `tree` (same shape, as used to build it).
SimpleFunction function_from_spec(TreePtr tree, const NodeSpec& spec);

/// (<phi>_J, <phi^2>_J) for every node J of depth <= phi.depth(), indexed by id.
std::vector<OmegaPoint> node_points(const SimpleFunction& phi);
OmegaPoint node_point(const SimpleFunction& phi, NodeId id);

/// <f(phi)>_J for every node of depth <= phi.depth(), indexed by id.
std::vector<double> node_averages(const SimpleFunction& phi, const std::function<double(double)>& f);

struct OscillationReport {
  NodeId node = 0;
  double mean = 0.0;
  double mean_sq = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

struct BmoNorms {
  double norm2 = 0.0;  // sup_J sqrt(delta2)
  double norm1 = 0.0;  // sup_J delta1
  std::vector<OscillationReport> reports;
};

BmoNorms bmo_norms(const SimpleFunction& phi);

/// Replaces phi by its averages on generation m. Throws DomainError if
/// m > phi.depth().
SimpleFunction truncate(const SimpleFunction& phi, std::size_t m);

}  // namespace bmo
