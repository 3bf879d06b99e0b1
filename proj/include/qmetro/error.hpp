#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmetro {

enum class ErrorCode {
  NonHermitian,
  NotPsd,
  SingularWhenFullRankRequired,
  DimensionOverflow,
  DimMismatch,
  InvalidState,
  DerivativeFailure,
  UnsupportedDerivative,
  RldUndefined,
  SingularQfim,
  EnumerationOverflow,
  IncompleteBasis,
  KindMismatch,
  InvalidN,
  NotPure,
  InvalidWeight,
  DegenerateConstraints,
  InvalidSpec,
  OutOfRange,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qmetro
