#include "apnlc/error.hpp"

namespace apnlc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::EmptyRequest: return "empty-request";
    case ErrorCode::UnsupportedFormat: return "unsupported-format";
    case ErrorCode::Padding: return "padding";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::LengthMismatch: return "length-mismatch";
    case ErrorCode::EstimationFailure: return "estimation-failure";
    case ErrorCode::PhaseUndefined: return "phase-undefined";
    case ErrorCode::ZeroPower: return "zero-power";
    case ErrorCode::NumericalFailure: return "numerical-failure";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::ClusterFailure: return "cluster-failure";
    case ErrorCode::InsufficientSupport: return "insufficient-support";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace apnlc
