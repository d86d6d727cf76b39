#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "bmo/tree.hpp"

namespace bmo {

using Rng = std::mt19937_64;

/// Random alpha-tree of the given depth. Every node gets between 1 and
/// min(max_children, floor(1/alpha)) children; child masses are alpha times
/// the parent plus an exponential share of the remaining mass.
TreePtr random_alpha_tree(Rng& rng, double alpha, std::size_t depth, std::size_t max_children = 4);

/// Leaf values uniform in [-1, 1] on generation `depth`, rescaled so the
/// BMO norm equals `target_norm`. A function with zero norm is returned as is.
SimpleFunction random_function(Rng& rng, TreePtr tree, std::size_t depth, double target_norm);

}  // namespace bmo
