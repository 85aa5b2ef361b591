#pragma once

#include <stdexcept>
#include <string>

namespace qhj {

enum class ErrorCode {
    unknown_key,
    missing_required_key,
    non_numeric_value,
    resonant_denominator,
    invalid_value,
    unsupported_kind,
    unsupported_regime,
    caustic,
    singular_time,
    step_failure,
    grid_too_coarse,
    negative_radicand,
    degenerate_state,
    unstable_step,
    boundary_leak,
    collapse,
    domain_error,
    pole,
    identification_violated,
};

const char* to_string(ErrorCode code);

// Single exception type for all domain errors; the code identifies the
// failure class so callers and bindings can dispatch without string matching.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_key: return "UnknownKey";
        case ErrorCode::missing_required_key: return "MissingRequiredKey";
        case ErrorCode::non_numeric_value: return "NonNumericValue";
        case ErrorCode::resonant_denominator: return "ResonantDenominator";
        case ErrorCode::invalid_value: return "InvalidValue";
        case ErrorCode::unsupported_kind: return "UnsupportedKind";
        case ErrorCode::unsupported_regime: return "UnsupportedRegime";
        case ErrorCode::caustic: return "CausticError";
        case ErrorCode::singular_time: return "SingularTime";
        case ErrorCode::step_failure: return "StepFailure";
        case ErrorCode::grid_too_coarse: return "GridTooCoarse";
        case ErrorCode::negative_radicand: return "NegativeRadicand";
        case ErrorCode::degenerate_state: return "DegenerateState";
        case ErrorCode::unstable_step: return "UnstableStep";
        case ErrorCode::boundary_leak: return "BoundaryLeak";
        case ErrorCode::collapse: return "Collapse";
        case ErrorCode::domain_error: return "DomainError";
        case ErrorCode::pole: return "Pole";
        case ErrorCode::identification_violated: return "IdentificationViolated";
    }
    return "Error";
}

} // namespace qhj
