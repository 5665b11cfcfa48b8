#include "landlaw/error.hpp"

namespace landlaw {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidDomain: return "invalid-domain";
    case ErrorCode::InvalidPartition: return "invalid-partition";
    case ErrorCode::DegenerateCube: return "degenerate-cube";
    case ErrorCode::IncompatiblePeriod: return "incompatible-period";
    case ErrorCode::InvalidPotential: return "invalid-potential";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::Parity: return "parity";
    case ErrorCode::SingularOperator: return "singular-operator";
    case ErrorCode::IterationLimit: return "iteration-limit";
    case ErrorCode::ShiftDegeneracy: return "shift-degeneracy";
    case ErrorCode::Scale: return "scale";
    case ErrorCode::Fit: return "fit";
    case ErrorCode::Window: return "window";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Io: return "io";
    case ErrorCode::Realization: return "realization";
  }
  return "unknown";
}

}  // namespace landlaw
