#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kmv {

enum class ErrorCode {
  precision_mismatch,
  invalid_argument,
  division_by_zero_pole,
  pole_at_nonpositive_integer,
  degenerate_nodes,
  pole_in_term,
  diverged,
  budget_exceeded,
  constraint_violated,
  unknown_identity,
  exhausted_attempts,
  no_degenerations,
  config_error,
  parse_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::precision_mismatch: return "PrecisionMismatch";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::division_by_zero_pole: return "DivisionByZeroPole";
    case ErrorCode::pole_at_nonpositive_integer: return "PoleAtNonPositiveInteger";
    case ErrorCode::degenerate_nodes: return "DegenerateNodes";
    case ErrorCode::pole_in_term: return "PoleInTerm";
    case ErrorCode::diverged: return "Diverged";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::constraint_violated: return "ConstraintViolated";
    case ErrorCode::unknown_identity: return "UnknownIdentity";
    case ErrorCode::exhausted_attempts: return "ExhaustedAttempts";
    case ErrorCode::no_degenerations: return "NoDegenerations";
    case ErrorCode::config_error: return "ConfigError";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code; the
/// harness copies it into reports instead of letting it escape.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kmv
