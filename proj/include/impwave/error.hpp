#pragma once

#include <stdexcept>
#include <string>

namespace impwave {

/// Raised when an argument violates a documented precondition. `field()` names
/// the offending input so front ends can report it without parsing the message.
class InputError : public std::invalid_argument {
 public:
  InputError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A symmetric positive-definite solve whose conditioning exceeds the
/// tolerated bound.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& message, double condition)
      : std::runtime_error(message), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace impwave
