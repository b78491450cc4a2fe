#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enclose/errors.hpp"
#include "enclose/ism.hpp"
#include "enclose/kinematics.hpp"
#include "enclose/reference.hpp"
#include "enclose/sdre.hpp"

namespace enclose {

struct ScenarioConfig {
  std::string name = "scenario";
  VehicleState pursuer;
  VehicleState target;
  ReferenceProfile reference = ReferenceProfile::constant(75.0);
  ManeuverProfile maneuver;
  Weights weights;
  StGains gains;
  double a_p_max = 98.1;                     // 10 g [m/s^2]
  double dt = 1e-3;                          // [s]
  double horizon = 60.0;                     // [s]
  bool curvature_known = true;
  double eta0 = 1.0;
  int log_decimation = 10;

  /// Number of fixed steps covering the horizon.
  long steps() const;
  /// Throws GuidanceError(invalid_config) describing every violated constraint.
  void validate() const;
};

/// Built-in engagement cases 1..4: time-varying or constant standoff radius
/// crossed with a maneuvering or non-maneuvering target. The pursuer flies
/// 40 m/s and starts 100 m west of the target (LOS angle 0, heading 20 deg);
/// mobile targets fly 10 m/s at 40 deg; case 4's target is stationary.
ScenarioConfig builtin_case(int n);

struct SimState {
  VehicleState pursuer;
  VehicleState target;
  double eta = 1.0;
  SlidingState sliding;
  double t = 0.0;
};

/// Everything computed at the start of a step; the command is held over it.
struct ControlSample {
  double t = 0.0;
  RelativeState rel;
  ReferenceSample ref;
  AugmentedState x;
  double a_t = 0.0;
  double a_pn = 0.0;
  double a_pd = 0.0;
  double a_p_cmd = 0.0;  // before saturation
  double a_p = 0.0;      // applied
  double care_residual = 0.0;
  double spectral_abscissa = 0.0;
  bool guard = false;
  bool saturated = false;
};

/// One closed-loop engagement. Owns the Riccati warm-start cache and the
/// singularity-guard memory, so instances must not be shared across runs.
class Simulator {
 public:
  explicit Simulator(ScenarioConfig cfg);

  const ScenarioConfig& config() const { return cfg_; }
  SimState initial_state() const;

  /// Computes the held command for `s` (updates the warm start and guard memory).
  ControlSample control(const SimState& s);

  /// One RK4 step of length dt. Errors are rethrown with the step time attached.
  SimState step(const SimState& s);

  const ControlSample& last_control() const { return last_; }
  const RiccatiTracker& riccati() const { return tracker_; }
  const SdcSystem& last_system() const { return last_sys_; }
  const CareSolution& last_solution() const { return last_sol_; }

 private:
  SimState advance(const SimState& s, const ControlSample& u) const;

  ScenarioConfig cfg_;
  RiccatiTracker tracker_;
  double prev_a_pd_ = 0.0;
  ControlSample last_;
  SdcSystem last_sys_;
  CareSolution last_sol_;
};

struct LogRecord {
  double t;
  double pursuer_x, pursuer_y, pursuer_gamma;
  double target_x, target_y, target_gamma;
  double r, theta, sigma_p, v_r, v_theta;
  double rho, rho_dot;
  double r_d, rdot_d, rddot_d;
  double eta, s, w;
  double a_pn, a_pd, a_p, a_t;
  double care_residual, spectral_abscissa;
  double guard, saturated;  // 0 or 1
};

struct TrajectoryLog {
  double dt = 0.0;      // integration step of the run
  int decimation = 1;   // records every `decimation` steps
  std::vector<LogRecord> records;

  static constexpr std::size_t kColumns = sizeof(LogRecord) / sizeof(double);
  /// Column headers with unit suffixes, in LogRecord field order.
  static const std::vector<std::string>& column_names();
};

struct RunMetrics {
  double convergence_time = 0.0;  // first t after which |rho| < 1 m; NaN if never
  double max_abs_a_p = 0.0;
  double terminal_mean_abs_rho = 0.0;
  double terminal_mean_sigma_p = 0.0;  // circular mean
  double terminal_mean_a_p = 0.0;
  double saturation_duty = 0.0;
  double guard_fraction = 0.0;
  double max_care_residual = 0.0;
  double max_spectral_abscissa = 0.0;
  double s_initial = 0.0;
  double max_abs_s = 0.0;
  double max_abs_s_after_transient = 0.0;  // t >= 10 s
  double max_speed_drift = 0.0;            // max |v - v0| over both vehicles
  double terminal_window = 0.0;            // seconds averaged at the end
  long steps = 0;
  long warm_solves = 0;
  long cold_solves = 0;
  bool completed = false;

  /// Run completed and every invariant monitor held.
  bool monitors_passed(const ScenarioConfig& cfg) const;
};

struct RunFailure {
  ErrorCode code;
  std::string message;
  double time;
};

struct RunResult {
  TrajectoryLog log;
  RunMetrics metrics;
  std::optional<RunFailure> failure;
};

inline constexpr double kConvergenceThreshold = 1.0;  // [m]
inline constexpr double kTerminalWindow = 10.0;       // [s]
inline constexpr double kTransientEnd = 10.0;         // [s]

struct RunOptions {
  bool keep_log = true;
};

/// Deterministic fixed-step run over [0, horizon]. Fatal errors stop the run
/// and are reported in `failure`; the partial log is kept.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct RelativeDegreeReport {
  long checked = 0;
  long passed = 0;
  long excluded = 0;
  double max_rel_error = 0.0;
  double fraction() const { return checked ? static_cast<double>(passed) / checked : 0.0; }
  bool ok(double required_fraction = 0.99) const {
    return checked > 0 && fraction() >= required_fraction;
  }
};

/// Compares second central differences of the logged rho against the closed
/// form. The command is held over each step, so the difference at t_k is
/// compared with the formula using the mean of the two adjoining commands.
/// Samples next to guard or saturation steps are excluded. A sample passes
/// when |fd - formula| <= rel_tol * rho_ddot_scale. Needs decimation 1.
RelativeDegreeReport verify_relative_degree(const TrajectoryLog& log, double rel_tol = 1e-3);

}  // namespace enclose
