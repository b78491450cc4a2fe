#pragma once

#include <vector>

namespace enclose {

enum class Phase { sin, cos };

struct SinusoidTerm {
  double amplitude = 0.0;  // [m]
  double frequency = 0.0;  // [rad/s]
  Phase phase = Phase::sin;
};

/// Standoff distance r_d(t) = base + sum_i amplitude_i * {sin|cos}(frequency_i t).
/// An empty term list is the constant profile.
struct ReferenceProfile {
  double base = 0.0;  // [m]
  std::vector<SinusoidTerm> terms;

  static ReferenceProfile constant(double radius) { return {radius, {}}; }
  bool is_constant() const { return terms.empty(); }
};

struct ReferenceSample {
  double r_d = 0.0;
  double rdot_d = 0.0;
  double rddot_d = 0.0;
};

ReferenceSample eval_reference(const ReferenceProfile& profile, double t);

/// Target lateral acceleration a_T(t).
///   zero:             0
///   constant:         bias
///   product_sinusoid: bias + amplitude * cos(cos_frequency t) * sin(sin_frequency t)
struct ManeuverProfile {
  enum class Kind { zero, constant, product_sinusoid };
  Kind kind = Kind::zero;
  double bias = 0.0;           // [m/s^2]
  double amplitude = 0.0;      // [m/s^2]
  double cos_frequency = 0.0;  // [rad/s]
  double sin_frequency = 0.0;  // [rad/s]

  static ManeuverProfile none() { return {}; }
  static ManeuverProfile constant(double a) { return {Kind::constant, a, 0.0, 0.0, 0.0}; }
  static ManeuverProfile product_sinusoid(double bias, double amplitude, double cos_frequency,
                                          double sin_frequency) {
    return {Kind::product_sinusoid, bias, amplitude, cos_frequency, sin_frequency};
  }
};

double eval_maneuver(const ManeuverProfile& profile, double t);

/// Sampled extrema of the profiles over [0, horizon].
struct ProfileExtrema {
  double r_d_min = 0.0;
  double r_d_max = 0.0;
  double rdot_d_max = 0.0;   // max |rdot_d|
  double rddot_d_max = 0.0;  // max |rddot_d|
  double a_t_max = 0.0;      // max |a_T|
};

/// Extrema found by sampling at 1 kHz plus the endpoint.
ProfileExtrema sample_extrema(const ReferenceProfile& profile, const ManeuverProfile& maneuver,
                              double horizon);

/// Conservative bound on the unmatched disturbance when the reference
/// curvature is folded into it: a_T^max + r_d^max (v_P + v_T)^2 + rddot_d^max.
/// Reporting only; the control law never uses it.
double disturbance_bound(const ReferenceProfile& profile, const ManeuverProfile& maneuver,
                         double v_p, double v_t, double horizon);

}  // namespace enclose
