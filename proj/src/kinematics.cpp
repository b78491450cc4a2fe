#include "enclose/kinematics.hpp"

#include <cmath>

#include "enclose/angles.hpp"
#include "enclose/errors.hpp"

namespace enclose {

RelativeState relative_state(const VehicleState& pursuer, const VehicleState& target) {
  const double dx = target.x - pursuer.x;
  const double dy = target.y - pursuer.y;
  const double r = std::hypot(dx, dy);
  if (!(r > 0.0)) {
    throw GuidanceError(ErrorCode::degenerate_geometry, "pursuer and target positions coincide");
  }
  RelativeState rel;
  rel.r = r;
  rel.theta = wrap_angle(std::atan2(dy, dx));
  rel.sigma_p = wrap_angle(pursuer.gamma - rel.theta);
  const double target_look = target.gamma - rel.theta;
  rel.v_r = target.v * std::cos(target_look) - pursuer.v * std::cos(rel.sigma_p);
  rel.v_theta = target.v * std::sin(target_look) - pursuer.v * std::sin(rel.sigma_p);
  return rel;
}

EngagementRates engagement_derivatives(const RelativeState& rel, const VehicleState& pursuer,
                                       const VehicleState& target, const AccelCommand& u) {
  if (!(rel.r > 0.0)) {
    throw GuidanceError(ErrorCode::degenerate_geometry, "non-positive range");
  }
  EngagementRates d;
  d.r_dot = rel.v_r;
  d.theta_dot = rel.v_theta / rel.r;
  d.pursuer = {pursuer.v * std::cos(pursuer.gamma), pursuer.v * std::sin(pursuer.gamma),
               u.a_p / pursuer.v};
  d.target = {target.v * std::cos(target.gamma), target.v * std::sin(target.gamma),
              target.v > 0.0 ? u.a_t / target.v : 0.0};
  return d;
}

double rho_ddot(const RelativeState& rel, double theta_dot, const AccelCommand& u,
                const VehicleState& target, double rddot_d) {
  return rel.r * theta_dot * theta_dot + u.a_p * std::sin(rel.sigma_p) -
         u.a_t * std::sin(target.gamma - rel.theta) - rddot_d;
}

double rho_ddot_scale(const RelativeState& rel, double theta_dot, const AccelCommand& u,
                      const VehicleState& target, double rddot_d) {
  return std::abs(rel.r * theta_dot * theta_dot) + std::abs(u.a_p * std::sin(rel.sigma_p)) +
         std::abs(u.a_t * std::sin(target.gamma - rel.theta)) + std::abs(rddot_d);
}

}  // namespace enclose
