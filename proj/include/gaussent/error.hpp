#pragma once

#include <stdexcept>
#include <string>

namespace gaussent {

/// Precondition violated by the caller (bad dimensions, invalid covariance, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation ran but could not meet its own accuracy contract.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace gaussent
