#include "descriptor/errors.hpp"

namespace descriptor {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ExactModeRequired: return "ExactModeRequired";
    case ErrorCode::UnsupportedStructure: return "UnsupportedStructure";
    case ErrorCode::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorCode::InconsistentInitialCondition: return "InconsistentInitialCondition";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::StepMatrixSingular: return "StepMatrixSingular";
    case ErrorCode::GammaPole: return "GammaPole";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularPencil:
    case ErrorCode::InconsistentInitialCondition:
    case ErrorCode::StepMatrixSingular:
    case ErrorCode::SingularMatrix:
    case ErrorCode::IllConditioned:
    case ErrorCode::NotNilpotent:
    case ErrorCode::UnsupportedStructure:
    case ErrorCode::DerivativeUnavailable:
    case ErrorCode::GammaPole:
      return true;
    default:
      return false;
  }
}

}  // namespace descriptor
