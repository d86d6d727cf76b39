#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the set where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// eps is at or beyond the John–Nirenberg threshold for the given alpha.
class ThresholdError : public DomainError {
 public:
  ThresholdError(const std::string& what, double threshold)
      : DomainError(what), threshold_(threshold) {}

  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// Malformed tree or martingale. `node()` is the breadth-first index of the
/// offending node.
class StructureError : public Error {
 public:
  StructureError(const std::string& what, std::size_t node)
      : Error(what + " (node " + std::to_string(node) + ")"), node_(node) {}

  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// A guaranteed mathematical fact failed numerically. Never expected.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not produce an admissible sample.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace bmo
