#pragma once

#include <stdexcept>
#include <string>

namespace vacuous {

/// Operand shapes disagree (contrast columns vs observation length, etc.).
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The hypothesis is well formed but outside what the closed forms cover,
/// e.g. a one-sided system with more than one effective constraint.
class UnsupportedHypothesis : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool condition, const std::string& what) {
  if (!condition) throw std::invalid_argument(what);
}

}  // namespace detail
}  // namespace vacuous
