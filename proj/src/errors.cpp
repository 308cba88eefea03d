#include "levydec/errors.hpp"

namespace levydec {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LevyConditionViolated: return "LevyConditionViolated";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::AuditFailed: return "AuditFailed";
    case ErrorCode::ZeroKernel: return "ZeroKernel";
    case ErrorCode::NonIntegrableKernel: return "NonIntegrableKernel";
    case ErrorCode::InfiniteMoment: return "InfiniteMoment";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::UnnormalizedWeights: return "UnnormalizedWeights";
    case ErrorCode::SupportClipped: return "SupportClipped";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace levydec
