#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmo/geometry.hpp"
#include "bmo/types.hpp"

namespace bmo {

struct CheckConfig {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double alpha = 0.5;
  double eps = 0.5;
  /// Relative tolerance for comparing finite-difference derivatives.
  double derivative_tolerance = 1e-6;
  /// Half-width of the x1 window that points are drawn from; 0 selects
  /// 3 eps / sqrt(alpha).
  double window = 0.0;
};

struct Witness {
  double beta = 0.0;
  OmegaPoint minus;
  OmegaPoint plus;
};

struct ShapeReport {
  std::size_t samples = 0;
  std::size_t attempts = 0;
  std::size_t violations = 0;
  double worst_violation = 0.0;  // largest amount by which the inequality failed
  std::optional<Witness> witness;
  std::uint64_t seed = 0;

  bool passed() const noexcept { return violations == 0; }
};

/// Samples beta in [alpha, 1/2] and x-, x+ in Omega_eps with
/// beta x- + (1 - beta) x+ in Omega_eps, and checks
///   F(beta x- + (1 - beta) x+) >= beta F(x-) + (1 - beta) F(x+)
/// (reversed in convex mode). Points are uniform on the part of Omega_eps
/// over the x1 window; the combination constraint is enforced by rejection.
/// Throws SamplingError if 10^6 consecutive attempts are rejected.
ShapeReport check_alpha_shape(const PlaneFunction& F, Shape mode, const CheckConfig& cfg);

/// Cross-check with the segment form of alpha-concavity, valid for
/// alpha in (0, 1]: along every segment [P, R] whose part outside Omega_eps
/// is at most (1 - alpha)|PR|, F at any point Q of the segment inside
/// Omega_eps lies above (below) the linear interpolation.
ShapeReport check_segment_shape(const PlaneFunction& F, Shape mode, const CheckConfig& cfg);

enum class BellmanKind { kJohnNirenberg, kOscillation };

struct ConditionReport {
  std::string name;
  bool applicable = true;
  std::size_t samples = 0;
  std::size_t discarded = 0;  // samples rejected before evaluation
  std::size_t violations = 0;
  double worst_violation = 0.0;
  std::optional<Witness> witness;  // beta unused except for the three-point condition
};

struct SufficientConditionsReport {
  BellmanKind kind = BellmanKind::kJohnNirenberg;
  std::uint64_t seed = 0;
  /// local shape, boundary derivatives, three-point inequality
  std::vector<ConditionReport> conditions;
  /// max |F(P) - (1 - a)F(S) - aF(Q)| over pairs with q - p at its
  /// largest admissible value, where the inequality becomes an equality.
  std::optional<double> extreme_slack;
  /// For the oscillation function the sufficient conditions are not used;
  /// the direct check replaces them.
  std::optional<ShapeReport> direct;

  bool passed() const noexcept;
};

/// Sampled verification of the sufficient conditions for the alpha-concavity
/// of the John–Nirenberg Bellman function (cfg.alpha, cfg.eps).
SufficientConditionsReport check_sufficient_conditions(BellmanKind kind, const CheckConfig& cfg);

}  // namespace bmo
