#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orbis {

enum class ErrorCode {
  InvalidInput,
  ParabolicInCocompact,
  NotHyperbolic,
  Inconsistent,
  BudgetExceeded,
  MissingRoot,
  QuadratureFailure,
  OutOfStrip,
  AmbiguousFit,
  NonIntegerFit,
  GridTooCoarse,
  NonIntegerMultiplicity,
  OverlapUnresolved,
};

std::string_view to_string(ErrorCode code);

// Domain error raised by every module. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace orbis
