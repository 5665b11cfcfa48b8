#pragma once

#include <stdexcept>
#include <string>

namespace landlaw {

/// Failure categories. Values are mirrored one-to-one by the C status codes in
/// landlaw.h, so keep the numbering stable.
enum class ErrorCode : int {
  InvalidArgument = 1,
  InvalidDomain = 2,
  InvalidPartition = 3,
  DegenerateCube = 4,
  IncompatiblePeriod = 5,
  InvalidPotential = 6,
  DimensionMismatch = 7,
  Parity = 8,
  SingularOperator = 9,
  IterationLimit = 10,
  ShiftDegeneracy = 11,
  Scale = 12,
  Fit = 13,
  Window = 14,
  Precondition = 15,
  Io = 16,
  Realization = 17,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace landlaw
