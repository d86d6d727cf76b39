#include "bmo/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmo/error.hpp"
#include "bmo/induction.hpp"
#include "bmo/jn_bellman.hpp"

namespace bmo {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

void flatten(const MartingaleSpec& s, std::vector<MartingaleNode>& out) {
  // Breadth-first so that node 0 is the root and levels are contiguous.
  std::vector<const MartingaleSpec*> order{&s};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const MartingaleSpec& cur = *order[i];
    MartingaleNode n{cur.measure, cur.point, std::nullopt, 0};
    if (cur.children.size() == 2) {
      n.children = std::make_pair(order.size(), order.size() + 1);
      order.push_back(&cur.children[0]);
      order.push_back(&cur.children[1]);
    } else if (!cur.children.empty()) {
      throw StructureError("martingale node must have zero or two children", i);
    }
    out.push_back(n);
  }
}

}  // namespace

BinaryMartingale::BinaryMartingale(std::vector<MartingaleNode> nodes, double eps)
    : nodes_(std::move(nodes)), parent_(nodes_.size(), kNoParent), eps_(eps) {
  if (!(eps > 0.0 && std::isfinite(eps))) throw DomainError("BinaryMartingale: eps must be positive");
  if (nodes_.empty()) throw DomainError("BinaryMartingale: no nodes");

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].children) continue;
    const auto [lo, hi] = *nodes_[i].children;
    for (std::size_t c : {lo, hi}) {
      if (c == 0 || c >= nodes_.size() || lo == hi) throw StructureError("invalid child index", i);
      if (parent_[c] != kNoParent) throw StructureError("node has two parents", c);
      parent_[c] = i;
    }
  }
  // Depths by walking down from the root; anything not reached is detached.
  std::vector<std::size_t> order{0};
  nodes_[0].depth = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const MartingaleNode& n = nodes_[order[k]];
    if (!n.children) continue;
    for (std::size_t c : {n.children->first, n.children->second}) {
      nodes_[c].depth = n.depth + 1;
      depth_ = std::max(depth_, n.depth + 1);
      order.push_back(c);
    }
  }
  if (order.size() != nodes_.size()) {
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (parent_[i] == kNoParent) throw StructureError("node is not connected to the root", i);
    throw StructureError("martingale contains a cycle", 0);
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const MartingaleNode& n = nodes_[i];
    if (!(n.measure > 0.0 && std::isfinite(n.measure)))
      throw StructureError("measure must be positive and finite at " + path(i), i);
    if (!in_omega_tol(n.point, eps_)) throw StructureError("point outside Omega_eps at " + path(i), i);
    if (!n.children) continue;
    const MartingaleNode& a = nodes_[n.children->first];
    const MartingaleNode& b = nodes_[n.children->second];
    if (!close(a.measure + b.measure, n.measure, n.measure))
      throw StructureError("children measures do not add up at " + path(i), i);
    const OmegaPoint lhs = n.measure * n.point;
    const OmegaPoint rhs = a.measure * a.point + b.measure * b.point;
    const double scale = n.measure * std::max(std::abs(n.point.x1), std::abs(n.point.x2));
    if (!close(lhs.x1, rhs.x1, scale) || !close(lhs.x2, rhs.x2, scale))
      throw StructureError("point is not the average of its children at " + path(i), i);
  }
}

BinaryMartingale BinaryMartingale::from_spec(const MartingaleSpec& root, double eps) {
  std::vector<MartingaleNode> nodes;
  flatten(root, nodes);
  return BinaryMartingale(std::move(nodes), eps);
}

std::string BinaryMartingale::path(std::size_t i) const {
  std::string out;
  while (i != 0 && i < nodes_.size() && parent_[i] != kNoParent) {
    const std::size_t p = parent_[i];
    out.insert(0, nodes_[p].children->first == i ? ".-" : ".+");
    i = p;
  }
  return "root" + out;
}

GoodnessReport martingale_goodness(const BinaryMartingale& m) {
  GoodnessReport r;
  r.alpha_max.assign(m.nodes().size(), 1.0);
  for (std::size_t i = 0; i < m.nodes().size(); ++i) {
    const MartingaleNode& n = m.node(i);
    if (!n.children) continue;
    const OmegaPoint& a = m.node(n.children->first).point;
    const OmegaPoint& b = m.node(n.children->second).point;
    if (a == b) continue;
    r.alpha_max[i] = segment_goodness(a, b, m.eps()).alpha_max;
    if (r.alpha_max[i] < r.overall) {
      r.overall = r.alpha_max[i];
      r.worst_node = i;
    }
  }
  return r;
}

SquareExample square_example(SquareStrategy strategy) {
  const double s = std::sqrt(2.0);
  const OmegaPoint zero{0.0, 0.0};
  const OmegaPoint up{s, 2.0};
  const OmegaPoint down{-s, 2.0};
  auto leaf = [](OmegaPoint p) { return MartingaleSpec{0.25, p, {}}; };
  auto merge = [](MartingaleSpec a, MartingaleSpec b) {
    const double m = a.measure + b.measure;
    const OmegaPoint p = (a.measure * a.point + b.measure * b.point) / m;
    return MartingaleSpec{m, p, {std::move(a), std::move(b)}};
  };

  MartingaleSpec root;
  if (strategy == SquareStrategy::kHalves) {
    root = merge(merge(leaf(zero), leaf(up)), merge(leaf(zero), leaf(down)));
  } else {
    // Splitting off a zero quarter first would leave (0, 4/3), outside
    // Omega_1; the quarter at sqrt 2 is the admissible first choice.
    root = merge(leaf(up), merge(leaf(down), merge(leaf(zero), leaf(zero))));
  }
  BinaryMartingale m = BinaryMartingale::from_spec(root, 1.0);
  const double overall = martingale_goodness(m).overall;
  return {std::move(m), overall};
}

JensenTrace jensen_fold(const BinaryMartingale& m, const PlaneFunction& F, Shape mode, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("jensen_fold: alpha must lie in (0, 1]");
  if (martingale_goodness(m).overall < alpha)
    throw DomainError("jensen_fold: martingale is not alpha-good for this alpha");

  const std::vector<MartingaleNode>& nodes = m.nodes();
  const double total = nodes[0].measure;
  std::vector<double> val(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) val[i] = F(nodes[i].point);

  JensenTrace tr;
  tr.level_sums.assign(m.depth() + 1, 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const MartingaleNode& n = nodes[i];
    // A node contributes to its own level; a leaf also to every later one.
    const std::size_t last = n.children ? n.depth : m.depth();
    for (std::size_t k = n.depth; k <= last; ++k) tr.level_sums[k] += n.measure * val[i] / total;
  }
  for (std::size_t k = 1; k < tr.level_sums.size(); ++k) {
    const double d = tr.level_sums[k] - tr.level_sums[k - 1];
    const double miss = mode == Shape::kConcave ? d : -d;
    if (miss > kChainSlack) {
      tr.violating_level = k;
      tr.excess = miss;
      break;
    }
  }
  return tr;
}

BinaryMartingale generate_martingale(const SimpleFunction& phi, double eps) {
  const AlphaTree& t = phi.tree();
  const std::vector<OmegaPoint> pts = node_points(phi);
  std::vector<MartingaleNode> nodes;

  // Expands tree node `id`, already stored as martingale node `slot`.
  auto expand = [&](auto&& self, NodeId id, std::size_t slot) -> void {
    // Single children repeat their parent's point and measure: skip them.
    while (t.node_depth(id) < phi.depth() && t.children(id).size() == 1) id = t.children(id).front();
    if (t.node_depth(id) >= phi.depth()) return;

    std::vector<NodeId> rest;
    for (NodeId c : t.children(id)) rest.push_back(c);
    double mass = t.measure(id);
    std::size_t current = slot;
    const std::vector<Split> splits = decompose_children(phi, pts, id, eps);
    for (std::size_t k = 0; k < splits.size(); ++k) {
      const Split& s = splits[k];
      const NodeId c = s.removed_child;
      std::erase(rest, c);
      mass -= t.measure(c);
      const bool last = k + 1 == splits.size();
      const OmegaPoint remainder = last ? pts[rest.front()] : (s.swapped ? s.minus : s.plus);

      const std::size_t left = nodes.size();
      nodes.push_back({t.measure(c), pts[c], std::nullopt, 0});
      nodes.push_back({last ? t.measure(rest.front()) : mass, remainder, std::nullopt, 0});
      nodes[current].children = std::make_pair(left, left + 1);
      self(self, c, left);
      current = left + 1;
      if (last) self(self, rest.front(), current);
    }
  };
  nodes.push_back({t.measure(t.root()), pts[t.root()], std::nullopt, 0});
  expand(expand, t.root(), 0);
  return BinaryMartingale(std::move(nodes), eps);
}

Alpha0Bound alpha0_bound(int n) {
  if (n < 1 || n > 60) throw DomainError("alpha0_bound: dimension must be in [1, 60]");
  if (n == 1) return {1.0, 1.0};
  const double a = std::ldexp(1.0, -n);
  return {a, jn_threshold(a)};
}

}  // namespace bmo
