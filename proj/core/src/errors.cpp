#include "pherm/errors.hpp"

namespace pherm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::AmbiguousClustering: return "AmbiguousClustering";
    case ErrorCode::NoSaturation: return "NoSaturation";
    case ErrorCode::InvalidWeyr: return "InvalidWeyr";
    case ErrorCode::ChainConstructionFailure: return "ChainConstructionFailure";
    case ErrorCode::SignCountMismatch: return "SignCountMismatch";
    case ErrorCode::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
    case ErrorCode::NotInModuli: return "NotInModuli";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace pherm
