#pragma once

#include <cmath>
#include <numbers>

namespace enclose {

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// sign with sign(0) = 0.
inline double signum(double v) { return static_cast<double>((0.0 < v) - (v < 0.0)); }

}  // namespace enclose
