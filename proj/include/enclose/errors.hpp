#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace enclose {

enum class ErrorCode {
  degenerate_geometry,
  auxiliary_state_collapse,
  singular_geometry,
  solver_failure,
  gain_validation,
  singular_input,
  invalid_config,
};

/// Single exception type for the library. `time` is filled in by the
/// simulator when an error escapes a control step; `residual` carries the
/// last Riccati residual for solver failures.
class GuidanceError : public std::runtime_error {
 public:
  GuidanceError(ErrorCode code, const std::string& what,
                std::optional<double> residual = std::nullopt)
      : std::runtime_error(what), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> residual() const noexcept { return residual_; }
  std::optional<double> time() const noexcept { return time_; }

  GuidanceError at_time(double t) const {
    GuidanceError e = *this;
    e.time_ = t;
    return e;
  }

 private:
  ErrorCode code_;
  std::optional<double> residual_;
  std::optional<double> time_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_geometry: return "degenerate_geometry";
    case ErrorCode::auxiliary_state_collapse: return "auxiliary_state_collapse";
    case ErrorCode::singular_geometry: return "singular_geometry";
    case ErrorCode::solver_failure: return "solver_failure";
    case ErrorCode::gain_validation: return "gain_validation";
    case ErrorCode::singular_input: return "singular_input";
    case ErrorCode::invalid_config: return "invalid_config";
  }
  return "unknown";
}

}  // namespace enclose
