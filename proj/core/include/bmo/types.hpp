#pragma once

#include <functional>
#include <limits>

#include "bmo/geometry.hpp"

namespace bmo {

enum class Shape { kConcave, kConvex };

inline const char* to_string(Shape s) { return s == Shape::kConcave ? "concave" : "convex"; }

/// Real-valued function on the plane, evaluated on the parabolic strip.
using PlaneFunction = std::function<double(const OmegaPoint&)>;

/// A real number or +infinity. Divergent Bellman values are represented
/// explicitly instead of by a sentinel.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }

  /// Finite value; +inf as a double for infinite values.
  double value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}

  double value_;
  bool infinite_;
};

}  // namespace bmo
