#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace physnet {

// Every failure the library reports carries one of these codes. The C API and
// the CLI map them onto a small fixed table of exit/status codes via
// status_class().
enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  SelfLoop,
  NonPositiveWeight,
  GraphTooLargeForOracle,
  DimensionMismatch,
  NotMetzler,
  NotDiagonallyDominant,
  DisconnectedInput,
  NumericallyIndeterminate,
  NotStronglyConnected,
  NoSpanningTree,
  NotBalanced,
  ZeroSigmaEntry,
  NonFiniteState,
  NotStrictlyConvex,
  NoInverseProvided,
  BracketingFailed,
  NonPositiveMass,
  NotControllable,
  DimensionChainBroken,
  LevelOutOfRange,
  OutOfEntropyDomain,
  ParseError,
};

std::string_view error_name(ErrorCode code) noexcept;

// Coarse classes, numerically equal to the CLI exit codes.
enum class StatusClass : int {
  Ok = 0,
  Argument = 1,
  Parse = 2,
  Structure = 3,
  Numeric = 4,
  Controllability = 5,
  SpecIncomplete = 6,
};

StatusClass status_class(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace physnet
