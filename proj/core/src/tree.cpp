#include "bmo/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bmo/error.hpp"

namespace bmo {

namespace {

constexpr double kRelTol = 1e-12;
constexpr NodeId kNoParent = static_cast<NodeId>(-1);

struct Flat {
  std::vector<const NodeSpec*> spec;
  std::vector<double> measure;
  std::vector<std::size_t> depth;
  std::vector<NodeId> parent;
  std::vector<NodeId> first_child;
  std::vector<std::size_t> child_count;
  std::vector<NodeId> gen_start;
};

// Breadth-first numbering; children of a node get consecutive ids.
Flat flatten(const NodeSpec& root) {
  Flat f;
  f.spec.push_back(&root);
  f.depth.push_back(0);
  f.parent.push_back(kNoParent);
  for (std::size_t i = 0; i < f.spec.size(); ++i) {
    const NodeSpec& s = *f.spec[i];
    f.measure.push_back(s.measure);
    f.first_child.push_back(f.spec.size());
    f.child_count.push_back(s.children.size());
    for (const NodeSpec& c : s.children) {
      f.spec.push_back(&c);
      f.depth.push_back(f.depth[i] + 1);
      f.parent.push_back(i);
    }
  }
  const std::size_t max_depth = f.depth.back();
  f.gen_start.assign(max_depth + 2, f.spec.size());
  for (std::size_t i = f.spec.size(); i-- > 0;) f.gen_start[f.depth[i]] = i;
  return f;
}

// Checks masses, sums and leaf depths; returns the minimum child/parent ratio.
double check_structure(const Flat& f) {
  const double root = f.measure[0];
  if (!(root > 0.0) || !std::isfinite(root))
    throw StructureError("root measure must be positive and finite", 0);
  const std::size_t max_depth = f.depth.back();
  double min_ratio = 1.0;
  for (NodeId i = 0; i < f.measure.size(); ++i) {
    const double m = f.measure[i];
    if (!(m > 0.0) || !std::isfinite(m))
      throw StructureError("node measure must be positive and finite", i);
    if (f.child_count[i] == 0) {
      if (f.depth[i] != max_depth)
        throw StructureError("leaf at depth " + std::to_string(f.depth[i]) +
                                 " but the tree has depth " + std::to_string(max_depth),
                             i);
      continue;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < f.child_count[i]; ++k) {
      const double c = f.measure[f.first_child[i] + k];
      sum += c;
      min_ratio = std::min(min_ratio, c / m);
    }
    if (std::abs(sum - m) > kRelTol * m)
      throw StructureError("children measures sum to " + std::to_string(sum) +
                               ", parent measure is " + std::to_string(m),
                           i);
  }
  return std::min(min_ratio, 1.0);
}

}  // namespace

std::shared_ptr<const AlphaTree> AlphaTree::build(const NodeSpec& root, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("tree alpha must lie in (0, 1/2]");
  Flat f = flatten(root);
  check_structure(f);
  for (NodeId i = 0; i < f.measure.size(); ++i) {
    for (std::size_t k = 0; k < f.child_count[i]; ++k) {
      const NodeId c = f.first_child[i] + k;
      if (f.measure[c] < alpha * f.measure[i] * (1.0 - kRelTol))
        throw StructureError("child measure below alpha times parent measure", c);
    }
  }
  std::shared_ptr<AlphaTree> t(new AlphaTree());
  t->alpha_ = alpha;
  t->measure_ = std::move(f.measure);
  t->depth_ = std::move(f.depth);
  t->parent_ = std::move(f.parent);
  t->first_child_ = std::move(f.first_child);
  t->child_count_ = std::move(f.child_count);
  t->gen_start_ = std::move(f.gen_start);
  return t;
}

std::optional<NodeId> AlphaTree::parent(NodeId id) const {
  const NodeId p = parent_.at(id);
  if (p == kNoParent) return std::nullopt;
  return p;
}

NodeRange AlphaTree::children(NodeId id) const {
  const NodeId first = first_child_.at(id);
  return NodeRange(first, first + child_count_[id]);
}

NodeRange AlphaTree::generation(std::size_t m) const {
  if (m > depth()) throw DomainError("generation " + std::to_string(m) + " beyond tree depth");
  return NodeRange(gen_start_[m], gen_start_[m + 1]);
}

NodeRange AlphaTree::descendants(NodeId id, std::size_t m) const {
  if (m < node_depth(id) || m > depth()) throw DomainError("descendants: generation out of range");
  NodeId first = id;
  NodeId last = id + 1;
  for (std::size_t d = depth_[id]; d < m; ++d) {
    const NodeId tail = last - 1;
    last = first_child_[tail] + child_count_[tail];
    first = first_child_[first];
  }
  return NodeRange(first, last);
}

TreePtr build_dyadic_tree(int n, int depth, double root_measure) {
  if (n < 1) throw DomainError("build_dyadic_tree: dimension must be >= 1");
  if (depth < 0) throw DomainError("build_dyadic_tree: depth must be >= 0");
  if (n > 30) throw DomainError("build_dyadic_tree: dimension too large");
  const std::size_t arity = std::size_t{1} << n;
  const double alpha = std::ldexp(1.0, -n);

  auto make = [&](auto&& self, double m, int level) -> NodeSpec {
    NodeSpec s{m, std::nullopt, {}};
    if (level < depth) {
      s.children.reserve(arity);
      for (std::size_t k = 0; k < arity; ++k) s.children.push_back(self(self, m * alpha, level + 1));
    }
    return s;
  };
  return AlphaTree::build(make(make, root_measure, 0), alpha);
}

double max_admissible_alpha(const NodeSpec& root) { return check_structure(flatten(root)); }

double max_admissible_alpha(const AlphaTree& tree) {
  double min_ratio = 1.0;
  for (NodeId i = 0; i < tree.size(); ++i)
    for (NodeId c : tree.children(i)) min_ratio = std::min(min_ratio, tree.measure(c) / tree.measure(i));
  return min_ratio;
}

SimpleFunction::SimpleFunction(TreePtr tree, std::size_t depth, std::vector<double> values)
    : tree_(std::move(tree)), depth_(depth), values_(std::move(values)) {
  if (!tree_) throw DomainError("SimpleFunction: null tree");
  if (depth_ > tree_->depth()) throw DomainError("SimpleFunction: depth beyond tree depth");
  if (values_.size() != tree_->generation(depth_).size())
    throw DomainError("SimpleFunction: expected one value per generation node");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("SimpleFunction: non-finite value");
}

double SimpleFunction::value(NodeId id) const {
  const NodeRange gen = tree_->generation(depth_);
  if (id < gen.front() || id > gen.back()) throw DomainError("value: node not in the function's generation");
  return values_[id - gen.front()];
}

SimpleFunction SimpleFunction::affine(double scale, double shift) const {
  std::vector<double> v(values_);
  for (double& x : v) x = scale * x + shift;
  return SimpleFunction(tree_, depth_, std::move(v));
}

SimpleFunction function_from_spec(TreePtr tree, const NodeSpec& spec) {
  if (!tree) throw DomainError("function_from_spec: null tree");
  const Flat f = flatten(spec);
  if (f.measure.size() != tree->size()) throw DomainError("function_from_spec: spec does not match tree");
  std::optional<std::size_t> depth;
  for (NodeId i = 0; i < f.spec.size(); ++i) {
    if (!f.spec[i]->value) continue;
    if (depth && *depth != f.depth[i]) throw StructureError("values on more than one generation", i);
    depth = f.depth[i];
  }
  if (!depth) throw StructureError("no node carries a value", 0);
  std::vector<double> values;
  for (NodeId i : tree->generation(*depth)) {
    if (!f.spec[i]->value) throw StructureError("generation node without a value", i);
    values.push_back(*f.spec[i]->value);
  }
  return SimpleFunction(std::move(tree), *depth, std::move(values));
}

std::vector<OmegaPoint> node_points(const SimpleFunction& phi) {
  const AlphaTree& t = phi.tree();
  const NodeRange gen = t.generation(phi.depth());
  std::vector<OmegaPoint> pts(gen.back() + 1);
  for (NodeId id : gen) {
    const double v = phi.values()[id - gen.front()];
    pts[id] = {v, v * v};
  }
  for (NodeId id = gen.front(); id-- > 0;) {
    OmegaPoint sum;
    for (NodeId c : t.children(id)) sum = sum + t.measure(c) * pts[c];
    pts[id] = sum / t.measure(id);
  }
  return pts;
}

OmegaPoint node_point(const SimpleFunction& phi, NodeId id) {
  if (id >= phi.tree().size() || phi.tree().node_depth(id) > phi.depth())
    throw DomainError("node_point: unknown node or node below the function's generation");
  return node_points(phi)[id];
}

std::vector<double> node_averages(const SimpleFunction& phi, const std::function<double(double)>& f) {
  const AlphaTree& t = phi.tree();
  const NodeRange gen = t.generation(phi.depth());
  std::vector<double> avg(gen.back() + 1);
  for (NodeId id : gen) avg[id] = f(phi.values()[id - gen.front()]);
  for (NodeId id = gen.front(); id-- > 0;) {
    double sum = 0.0;
    for (NodeId c : t.children(id)) sum += t.measure(c) * avg[c];
    avg[id] = sum / t.measure(id);
  }
  return avg;
}

BmoNorms bmo_norms(const SimpleFunction& phi) {
  const AlphaTree& t = phi.tree();
  const std::vector<OmegaPoint> pts = node_points(phi);
  const NodeRange gen = t.generation(phi.depth());

  BmoNorms out;
  out.reports.reserve(pts.size());
  double max_delta2 = 0.0;
  for (NodeId id = 0; id < pts.size(); ++id) {
    const double mean = pts[id].x1;
    double d1 = 0.0;
    double d2 = 0.0;
    for (NodeId leaf : t.descendants(id, phi.depth())) {
      const double dev = phi.values()[leaf - gen.front()] - mean;
      d1 += t.measure(leaf) * std::abs(dev);
      d2 += t.measure(leaf) * dev * dev;
    }
    d1 /= t.measure(id);
    d2 /= t.measure(id);
    out.reports.push_back({id, mean, pts[id].x2, d1, d2});
    max_delta2 = std::max(max_delta2, d2);
    out.norm1 = std::max(out.norm1, d1);
  }
  out.norm2 = std::sqrt(max_delta2);
  return out;
}

SimpleFunction truncate(const SimpleFunction& phi, std::size_t m) {
  if (m > phi.depth()) throw DomainError("truncate: generation beyond the function's depth");
  const std::vector<OmegaPoint> pts = node_points(phi);
  std::vector<double> values;
  for (NodeId id : phi.tree().generation(m)) values.push_back(pts[id].x1);
  return SimpleFunction(phi.tree_ptr(), m, std::move(values));
}

}  // namespace bmo
