#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppir {

enum class Errc {
  NonPrimeOrder,
  UnsupportedOrder,
  FieldMismatch,
  ZeroInverse,
  FieldTooSmall,
  BadDimensions,
  NotSystematic,
  NotMDS,
  LengthMismatch,
  SingularSubmatrix,
  OutOfRange,
  HiddenIndices,
  AssumptionViolated,
  ExhaustedIndices,
  PartitionInfeasible,
  DimensionMismatch,
  InsufficientKnowns,
  RecoveryFailed,
  TooLargeToEnumerate,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

// Every failure in the library is reported through this one exception type;
// callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ppir
