#include "actmod/error.hpp"

#include <cmath>

namespace actmod {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::Unstable: return "unstable";
    case ErrorCode::NoOscillation: return "no oscillation";
    case ErrorCode::CrcMismatch: return "crc mismatch";
    case ErrorCode::RangeOverflow: return "range overflow";
    case ErrorCode::UndefinedMetric: return "undefined metric";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
  }
}

}  // namespace actmod
