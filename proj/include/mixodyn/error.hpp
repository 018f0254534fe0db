#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixodyn {

enum class ErrorKind {
  InvalidParams,
  ScaleDegenerate,
  TradeOffViolated,
  NotSaturated,
  ManifoldViolation,
  DenominatorVanishes,
  LocalConditionViolated,
  StarAbsent,
  IllConditioned,
  NotAnEquilibrium,
  NoCoexistence,
  StepSizeUnderflow,
  NegativeStateBeyondTolerance,
  OnBoundary,
  Io,
  Usage,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mixodyn
