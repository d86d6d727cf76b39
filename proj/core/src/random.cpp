#include "bmo/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bmo/error.hpp"

namespace bmo {

TreePtr random_alpha_tree(Rng& rng, double alpha, std::size_t depth, std::size_t max_children) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("random_alpha_tree: alpha must lie in (0, 1/2]");
  if (max_children < 1) throw DomainError("random_alpha_tree: max_children must be >= 1");
  const auto fit = static_cast<std::size_t>(std::floor(1.0 / alpha + 1e-9));
  const std::size_t kmax = std::max<std::size_t>(1, std::min(max_children, fit));
  std::uniform_int_distribution<std::size_t> count(1, kmax);
  std::exponential_distribution<double> share(1.0);

  auto make = [&](auto&& self, double m, std::size_t level) -> NodeSpec {
    NodeSpec s{m, std::nullopt, {}};
    if (level == depth) return s;
    const std::size_t k = count(rng);
    if (k == 1) {
      s.children.push_back(self(self, m, level + 1));
      return s;
    }
    std::vector<double> u(k);
    double total = 0.0;
    for (double& x : u) total += (x = share(rng));
    const double free = std::max(0.0, 1.0 - static_cast<double>(k) * alpha);
    double used = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double w = i + 1 < k ? alpha + free * u[i] / total : 1.0 - used;
      used += w;
      s.children.push_back(self(self, m * w, level + 1));
    }
    return s;
  };
  return AlphaTree::build(make(make, 1.0, 0), alpha);
}

SimpleFunction random_function(Rng& rng, TreePtr tree, std::size_t depth, double target_norm) {
  if (!(target_norm >= 0.0)) throw DomainError("random_function: target norm must be nonnegative");
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> v(tree->generation(depth).size());
  for (double& x : v) x = value(rng);
  SimpleFunction raw(std::move(tree), depth, std::move(v));
  const double norm = bmo_norms(raw).norm2;
  if (norm == 0.0) return raw;
  return raw.affine(target_norm / norm, 0.0);
}

}  // namespace bmo
