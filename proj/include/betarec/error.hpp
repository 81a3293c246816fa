#pragma once

#include <stdexcept>
#include <string>

namespace betarec {

enum class ErrorKind {
  InvalidArgument,
  Domain,
  Parse,
  IndeterminateSign,
  IndeterminateDigit,
  PrecisionCap,
  NoRoot,
  TruncationTooShort,
  InvalidTruncation,
  LengthMismatch,
  InadmissibleWord,
  InsufficientDepth,
  PeriodicPoint,
  NoReturn,
  FormViolation,
  CountableRegime,
  Infeasible,
  Budget,
  Inconclusive,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace betarec
