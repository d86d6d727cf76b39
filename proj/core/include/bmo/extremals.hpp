#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bmo/tree.hpp"
#include "bmo/types.hpp"

namespace bmo {

/// How the chain Q_0 > Q_1 > ... of the extremal function is closed at the
/// truncation level N.
enum class TailClosure {
  /// Q_N is split once more into a two-valued tail with mean <phi*>_{Q_N}
  /// and oscillation exactly 1; the function lives on generation N + 1.
  kMomentMatched,
  /// Q_N carries the constant <phi*>_{Q_N}; the function lives on
  /// generation N.
  kConditionalMean,
};

/// The extremal function phi* on the n-dimensional dyadic tree: inside Q_k,
/// the 2^n - 1 subcubes other than Q_{k+1} carry 2^{-n/2}(k(2^n - 1) - 1).
/// Subcubes off the chain are constant and padded to the last generation by
/// single-child chains, which keeps the tree linear in the depth.
struct StarFunction {
  int n = 1;
  std::size_t depth = 1;  // truncation level N
  TailClosure closure = TailClosure::kMomentMatched;
  SimpleFunction function;
  std::vector<NodeId> chain;  // ids of Q_0, ..., Q_N
};

StarFunction build_phi_star(int n, std::size_t depth, TailClosure closure = TailClosure::kMomentMatched);

/// Closed forms <phi*>_{Q_k} = 2^{-n/2}(2^n - 1)k and
/// <phi*^2>_{Q_k} = 1 + 2^{-n}(2^n - 1)^2 k^2.
double star_mean(int n, std::size_t k);
double star_second_moment(int n, std::size_t k);

struct ExpAverage {
  double truncated = 0.0;  // <e^{eps phi* + a}> with the conditional-mean closure at `depth`
  ExtendedReal closed_form = ExtendedReal::infinity();  // e^a C(eps, n), or infinite
  double ratio = 0.0;  // 2^{-n} e^{eps 2^{-n/2} (2^n - 1)}; the series converges iff ratio < 1
};

/// Exponential average of eps phi* + a truncated at `depth`, summed in
/// closed form (no term-by-term accumulation).
ExpAverage exp_average_phi_a(int n, double eps, double a, std::size_t depth);

/// <|phi_a|> on the depth-truncated tree, where phi_a = sign(a)(eps phi* + |a|)
/// has Bellman point (a, a^2 + eps^2). Requires |a| >= 2^{-n/2} eps, which
/// makes phi_a of constant sign.
double abs_average_phi_a(int n, double eps, double a, std::size_t depth);

struct SharpnessRow {
  std::size_t depth = 0;
  double lhs = 0.0;  // closed-form truncated average
  std::optional<double> tree_lhs;  // same, computed on an explicit tree
  std::optional<double> gap;  // closed_form - lhs, convergent regime only
};

struct SharpnessReport {
  int n = 1;
  double eps = 0.0;
  double a = 0.0;
  double eps0 = 0.0;
  bool convergent = false;
  double ratio = 0.0;
  ExtendedReal closed_form = ExtendedReal::infinity();
  std::vector<SharpnessRow> rows;
  /// lhs(D) - lhs(D - 1) at the largest depth; tends to a positive constant
  /// at the threshold and grows beyond it.
  double growth_slope = 0.0;
  /// verify_jn on the explicit trees (convergent regime only).
  std::optional<bool> verify_holds;
};

inline constexpr std::size_t kMaxTreeDepth = 40;

SharpnessReport sharpness_report(int n, double eps, std::size_t max_depth, double a = 0.0);

}  // namespace bmo
