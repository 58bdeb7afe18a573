#pragma once

#include <stdexcept>
#include <string>

namespace lucorr {

/// Categories of failure raised by the library. The CLI maps every one of
/// them to exit code 2.
enum class ErrorKind {
  invalid_dimension,
  invalid_index,
  shape,
  numerical_consistency,
  degenerate_request,
  invalid_cut,
  validation,
  pattern,
  duplicate_measurement,
  resource_cap,
  parse,
  out_of_range,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::shape: return "shape";
    case ErrorKind::numerical_consistency: return "numerical-consistency";
    case ErrorKind::degenerate_request: return "degenerate-request";
    case ErrorKind::invalid_cut: return "invalid-cut";
    case ErrorKind::validation: return "validation";
    case ErrorKind::pattern: return "pattern";
    case ErrorKind::duplicate_measurement: return "duplicate-measurement";
    case ErrorKind::resource_cap: return "resource-cap";
    case ErrorKind::parse: return "parse";
    case ErrorKind::out_of_range: return "out-of-range";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace lucorr
