#include "qmetro/error.hpp"

namespace qmetro {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::SingularWhenFullRankRequired: return "SingularWhenFullRankRequired";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::DerivativeFailure: return "DerivativeFailure";
    case ErrorCode::UnsupportedDerivative: return "UnsupportedDerivative";
    case ErrorCode::RldUndefined: return "RldUndefined";
    case ErrorCode::SingularQfim: return "SingularQfim";
    case ErrorCode::EnumerationOverflow: return "EnumerationOverflow";
    case ErrorCode::IncompleteBasis: return "IncompleteBasis";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::DegenerateConstraints: return "DegenerateConstraints";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace qmetro
