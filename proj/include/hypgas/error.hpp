#pragma once

#include <stdexcept>
#include <string>

namespace hypgas {

/// Invalid argument: violated precondition or malformed input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A bound was requested outside the parameter regime where it holds.
/// Carries the offending quantity and the threshold it had to stay below.
class RegimeError : public std::runtime_error {
 public:
  RegimeError(const std::string& what, double value, double threshold)
      : std::runtime_error(what), value_(value), threshold_(threshold) {}

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] double threshold() const noexcept { return threshold_; }

 private:
  double value_;
  double threshold_;
};

/// Numerical breakdown (integrator failure, singular system, matching failure).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hypgas
