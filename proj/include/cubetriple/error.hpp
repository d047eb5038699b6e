#pragma once

#include <stdexcept>
#include <string>

namespace cubetriple {

enum class ErrorCode {
  division_by_zero,
  dimension_mismatch,
  out_of_range,
  parse_error,
  dependent_input,
  singular_system,
  invariant_violation,
  infeasible_targets,
  needs_field_extension,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::division_by_zero: return "division by zero";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::out_of_range: return "argument out of range";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::dependent_input: return "linearly dependent input";
    case ErrorCode::singular_system: return "singular system";
    case ErrorCode::invariant_violation: return "invariant violation";
    case ErrorCode::infeasible_targets: return "infeasible targets";
    case ErrorCode::needs_field_extension: return "targets require field extension";
  }
  return "unknown error";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cubetriple
