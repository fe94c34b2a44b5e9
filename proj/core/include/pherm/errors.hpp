#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pherm {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  SingularMatrix,
  ConvergenceFailure,
  AmbiguousClustering,
  NoSaturation,
  InvalidWeyr,
  ChainConstructionFailure,
  SignCountMismatch,
  ZeroLeadingCoefficient,
  IndexMismatch,
  VerificationFailure,
  NotInModuli,
  InvalidGrid,
  IndexOutOfRange,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace pherm
