#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbahp {

enum class ErrorCode {
  syntax,
  duplicate_declaration,
  unknown_reference,
  cycle,
  unknown_role,
  unknown_permission,
  empty_request,
  no_candidate,
  candidate_not_superset,
  empty_scores,
  non_positive_preference,
  dimension_mismatch,
  no_convergence,
  unknown_criterion,
  invalid_parameter,
};

// Stable identifiers used in reports, wire documents and CLI diagnostics.
inline constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::syntax: return "SYNTAX";
    case ErrorCode::duplicate_declaration: return "DUPLICATE_DECLARATION";
    case ErrorCode::unknown_reference: return "UNKNOWN_REFERENCE";
    case ErrorCode::cycle: return "CYCLE";
    case ErrorCode::unknown_role: return "UNKNOWN_ROLE";
    case ErrorCode::unknown_permission: return "UNKNOWN_PERMISSION";
    case ErrorCode::empty_request: return "EMPTY_REQUEST";
    case ErrorCode::no_candidate: return "NO_CANDIDATE";
    case ErrorCode::candidate_not_superset: return "CANDIDATE_NOT_SUPERSET";
    case ErrorCode::empty_scores: return "EMPTY_SCORES";
    case ErrorCode::non_positive_preference: return "NON_POSITIVE_PREFERENCE";
    case ErrorCode::dimension_mismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::no_convergence: return "NO_CONVERGENCE";
    case ErrorCode::unknown_criterion: return "UNKNOWN_CRITERION";
    case ErrorCode::invalid_parameter: return "INVALID_PARAMETER";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rbahp
