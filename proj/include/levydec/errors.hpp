#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace levydec {

enum class ErrorCode {
  InvalidArgument,
  LevyConditionViolated,
  QuadratureNotConverged,
  NegativeTime,
  AuditFailed,
  ZeroKernel,
  NonIntegrableKernel,
  InfiniteMoment,
  AlphaOutOfRange,
  GridTooCoarse,
  TruncationTooSmall,
  UnnormalizedWeights,
  SupportClipped,
  NonHermitianInput,
  WindowTooNarrow,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

// Every library failure is reported through this type; the code is what the
// CLI prints on its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace levydec
