#pragma once

#include <stdexcept>
#include <string>

namespace actmod {

enum class ErrorCode {
  InvalidArgument = 1,
  NonFinite,
  Unstable,
  NoOscillation,
  CrcMismatch,
  RangeOverflow,
  UndefinedMetric,
  Config,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Throws InvalidArgument naming `what` unless `value` is finite.
void require_finite(double value, const char* what);

}  // namespace actmod
