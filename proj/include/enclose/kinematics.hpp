#pragma once

// Planar point-mass engagement kinematics. The line of sight is the ray from
// the pursuer to the target; theta is its inertial angle measured from +x.

namespace enclose {

struct VehicleState {
  double x = 0.0;      // east [m]
  double y = 0.0;      // north [m]
  double gamma = 0.0;  // heading [rad]
  double v = 0.0;      // speed [m/s], constant
};

struct RelativeState {
  double r = 0.0;        // separation [m]
  double theta = 0.0;    // LOS angle [rad]
  double sigma_p = 0.0;  // pursuer look angle gamma_P - theta [rad]
  double v_r = 0.0;      // range rate [m/s]
  double v_theta = 0.0;  // r * theta_dot [m/s]

  double theta_dot() const { return v_theta / r; }
};

struct AccelCommand {
  double a_p = 0.0;  // pursuer lateral acceleration [m/s^2]
  double a_t = 0.0;  // target lateral acceleration [m/s^2]
};

struct VehicleRates {
  double x_dot = 0.0;
  double y_dot = 0.0;
  double gamma_dot = 0.0;
};

struct EngagementRates {
  double r_dot = 0.0;
  double theta_dot = 0.0;
  VehicleRates pursuer;
  VehicleRates target;
};

/// Polar engagement variables of the pursuer relative to the target.
/// Throws GuidanceError(degenerate_geometry) for coincident positions.
RelativeState relative_state(const VehicleState& pursuer, const VehicleState& target);

/// Time derivatives of the engagement. A stationary target (v = 0) has no
/// heading dynamics regardless of a_t.
EngagementRates engagement_derivatives(const RelativeState& rel, const VehicleState& pursuer,
                                       const VehicleState& target, const AccelCommand& u);

/// Closed-form second derivative of the range error rho = r - r_d:
///   r theta_dot^2 + a_P sin(sigma_P) - a_T sin(gamma_T - theta) - rddot_d
double rho_ddot(const RelativeState& rel, double theta_dot, const AccelCommand& u,
                const VehicleState& target, double rddot_d);

/// Sum of the magnitudes of the terms in rho_ddot. Used as the scale for
/// relative comparisons, since rho_ddot itself is ~0 on a converged orbit.
double rho_ddot_scale(const RelativeState& rel, double theta_dot, const AccelCommand& u,
                      const VehicleState& target, double rddot_d);

}  // namespace enclose
