#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace descriptor {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotNilpotent,
  SingularMatrix,
  SingularPencil,
  IllConditioned,
  ExactModeRequired,
  UnsupportedStructure,
  DerivativeUnavailable,
  InconsistentInitialCondition,
  GridTooCoarse,
  InsufficientHistory,
  StepMatrixSingular,
  GammaPole,
  InvalidOrder,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

/// True for outcomes that describe the mathematical problem (singular pencil,
/// inconsistent data, ...) rather than a malformed request.
bool is_domain_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace descriptor
