#include "bmo/extremals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bmo/error.hpp"
#include "bmo/induction.hpp"
#include "bmo/jn_bellman.hpp"

namespace bmo {

namespace {

void require_dimension(int n, const char* who) {
  if (n < 1 || n > 30) throw DomainError(std::string(who) + ": dimension must be in [1, 30]");
}

// Value of phi* on the siblings of Q_{k+1} inside Q_k.
double off_chain_value(int n, std::size_t k) {
  const double cells = std::ldexp(1.0, n);
  return std::pow(2.0, -0.5 * n) * (static_cast<double>(k) * (cells - 1.0) - 1.0);
}

// A node carrying `value`, extended downwards by `levels` single-child steps.
NodeSpec padded_leaf(double measure, double value, std::size_t levels) {
  NodeSpec leaf{measure, value, {}};
  for (std::size_t i = 0; i < levels; ++i) leaf = NodeSpec{measure, std::nullopt, {std::move(leaf)}};
  return leaf;
}

NodeSpec chain_spec(int n, std::size_t k, std::size_t depth, TailClosure closure, double measure) {
  const std::size_t cells = std::size_t{1} << n;
  const double p = std::ldexp(1.0, -n);
  const std::size_t last = closure == TailClosure::kMomentMatched ? depth + 1 : depth;
  const double mean = star_mean(n, k);

  NodeSpec node{measure, std::nullopt, {}};
  if (k == depth) {
    if (closure == TailClosure::kConditionalMean) {
      node.value = mean;
      return node;
    }
    // One cell above the mean, the others below, oscillation exactly 1.
    node.children.push_back({measure * p, mean + std::sqrt((1.0 - p) / p), {}});
    for (std::size_t i = 1; i < cells; ++i) node.children.push_back({measure * p, mean - std::sqrt(p / (1.0 - p)), {}});
    return node;
  }
  node.children.push_back(chain_spec(n, k + 1, depth, closure, measure * p));
  const double v = off_chain_value(n, k);
  for (std::size_t i = 1; i < cells; ++i) node.children.push_back(padded_leaf(measure * p, v, last - (k + 1)));
  return node;
}

struct Series {
  double log_ratio;
  double prefactor;  // e^{a - eps 2^{-n/2}} (1 - 2^{-n})
};

Series series(int n, double eps, double a) {
  const double cells = std::ldexp(1.0, n);
  const double s = std::pow(2.0, -0.5 * n);
  return {-n * std::numbers::ln2 + eps * s * (cells - 1.0), std::exp(a - eps * s) * (1.0 - 1.0 / cells)};
}

// Conditional-mean truncation of <e^{eps phi* + a}> at depth D.
double truncated_exp(const Series& s, double a, std::size_t depth) {
  const double D = static_cast<double>(depth);
  const double partial = s.log_ratio == 0.0 ? D : std::expm1(D * s.log_ratio) / std::expm1(s.log_ratio);
  return s.prefactor * partial + std::exp(a + D * s.log_ratio);
}

}  // namespace

double star_mean(int n, std::size_t k) {
  const double cells = std::ldexp(1.0, n);
  return std::pow(2.0, -0.5 * n) * (cells - 1.0) * static_cast<double>(k);
}

double star_second_moment(int n, std::size_t k) {
  const double cells = std::ldexp(1.0, n);
  const double kk = static_cast<double>(k);
  return 1.0 + (cells - 1.0) * (cells - 1.0) * kk * kk / cells;
}

StarFunction build_phi_star(int n, std::size_t depth, TailClosure closure) {
  require_dimension(n, "build_phi_star");
  if (n > 10) throw DomainError("build_phi_star: dimension must be at most 10");
  if (depth < 1) throw DomainError("build_phi_star: depth must be at least 1");
  if (depth > 400) throw DomainError("build_phi_star: depth must be at most 400");

  const NodeSpec spec = chain_spec(n, 0, depth, closure, 1.0);
  TreePtr tree = AlphaTree::build(spec, std::ldexp(1.0, -n));
  SimpleFunction f = function_from_spec(tree, spec);

  std::vector<NodeId> chain{tree->root()};
  for (std::size_t k = 0; k < depth; ++k) chain.push_back(tree->children(chain.back()).front());
  return {n, depth, closure, std::move(f), std::move(chain)};
}

ExpAverage exp_average_phi_a(int n, double eps, double a, std::size_t depth) {
  require_dimension(n, "exp_average_phi_a");
  if (!(eps > 0.0)) throw DomainError("exp_average_phi_a: eps must be positive");
  const Series s = series(n, eps, a);

  ExpAverage out;
  out.ratio = std::exp(s.log_ratio);
  out.truncated = truncated_exp(s, a, depth);
  const DyadicConstants c = dyadic_constants(n);
  if (eps < c.eps0) {
    try {
      out.closed_form = ExtendedReal::finite(std::exp(a) * c.C(eps));
    } catch (const ThresholdError&) {
      // within rounding of the threshold: divergent
    }
  }
  return out;
}

double abs_average_phi_a(int n, double eps, double a, std::size_t depth) {
  require_dimension(n, "abs_average_phi_a");
  if (!(eps >= 0.0)) throw DomainError("abs_average_phi_a: eps must be nonnegative");
  const double floor = std::pow(2.0, -0.5 * n) * eps;
  if (std::abs(a) < floor * (1.0 - 1e-12) || a == 0.0)
    throw DomainError("abs_average_phi_a: need |a| >= 2^{-n/2} eps for a function of constant sign");

  const StarFunction star = build_phi_star(n, depth);
  const double sign = a > 0.0 ? 1.0 : -1.0;
  const SimpleFunction phi_a = star.function.affine(sign * eps, a);
  return node_averages(phi_a, [](double v) { return std::abs(v); })[0];
}

SharpnessReport sharpness_report(int n, double eps, std::size_t max_depth, double a) {
  require_dimension(n, "sharpness_report");
  if (max_depth < 1) throw DomainError("sharpness_report: max_depth must be at least 1");
  const ExpAverage head = exp_average_phi_a(n, eps, a, 0);
  const DyadicConstants c = dyadic_constants(n);

  SharpnessReport r;
  r.n = n;
  r.eps = eps;
  r.a = a;
  r.eps0 = c.eps0;
  r.closed_form = head.closed_form;
  r.convergent = head.closed_form.is_finite();
  r.ratio = head.ratio;

  std::vector<std::size_t> depths;
  for (std::size_t d = 1; d <= std::min(max_depth, kMaxTreeDepth); ++d) depths.push_back(d);
  for (std::size_t d = kMaxTreeDepth + 10; d < max_depth; d += 10) depths.push_back(d);
  if (max_depth > kMaxTreeDepth) depths.push_back(max_depth);

  const Series s = series(n, eps, a);
  bool all_hold = true;
  for (std::size_t d : depths) {
    SharpnessRow row;
    row.depth = d;
    row.lhs = truncated_exp(s, a, d);
    if (r.convergent) row.gap = r.closed_form.value() - row.lhs;
    if (d <= kMaxTreeDepth) {
      const StarFunction star = build_phi_star(n, d, TailClosure::kConditionalMean);
      const SimpleFunction phi = star.function.affine(eps, a);
      row.tree_lhs = node_averages(phi, [](double v) { return std::exp(v); })[0];
      if (r.convergent) {
        const JnVerification v = verify_jn(phi, c.alpha, eps);
        all_hold = all_hold && v.holds && v.chain.monotone();
      }
    }
    r.rows.push_back(row);
  }
  if (r.convergent) r.verify_holds = all_hold;
  r.growth_slope = truncated_exp(s, a, max_depth) - truncated_exp(s, a, max_depth - 1);
  return r;
}

}  // namespace bmo
