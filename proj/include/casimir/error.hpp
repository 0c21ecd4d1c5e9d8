#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace casimir {

enum class ErrorCode {
  NonPositiveBeta,
  NonPositiveL,
  NonFiniteParameter,
  WrongMode,
  OutOfDomain,
  TauNotInUpperHalfPlane,
  NonConvergence,
  ToleranceNotReached,
  NonFiniteIntegrand,
  NonPositiveArgument,
  SingularSystem,
  IterationLimitExceeded,
  GridTooCoarse,
  InvalidGeometry,
  Overflow,
  InsufficientStatistics,
  ForceUnderflow,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace casimir
