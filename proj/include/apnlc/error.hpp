#pragma once

#include <stdexcept>
#include <string>

namespace apnlc {

enum class ErrorCode {
  InvalidArgument,
  EmptyRequest,
  UnsupportedFormat,
  Padding,
  DimensionMismatch,
  LengthMismatch,
  EstimationFailure,
  PhaseUndefined,
  ZeroPower,
  NumericalFailure,
  Aliasing,
  ClusterFailure,
  InsufficientSupport,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
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

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace apnlc
