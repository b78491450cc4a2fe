#include "enclose/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enclose/errors.hpp"

namespace enclose {

ReferenceSample eval_reference(const ReferenceProfile& profile, double t) {
  ReferenceSample s{profile.base, 0.0, 0.0};
  for (const auto& term : profile.terms) {
    const double w = term.frequency;
    const double sn = std::sin(w * t);
    const double cs = std::cos(w * t);
    if (term.phase == Phase::sin) {
      s.r_d += term.amplitude * sn;
      s.rdot_d += term.amplitude * w * cs;
      s.rddot_d -= term.amplitude * w * w * sn;
    } else {
      s.r_d += term.amplitude * cs;
      s.rdot_d -= term.amplitude * w * sn;
      s.rddot_d -= term.amplitude * w * w * cs;
    }
  }
  return s;
}

double eval_maneuver(const ManeuverProfile& profile, double t) {
  switch (profile.kind) {
    case ManeuverProfile::Kind::zero:
      return 0.0;
    case ManeuverProfile::Kind::constant:
      return profile.bias;
    case ManeuverProfile::Kind::product_sinusoid:
      return profile.bias + profile.amplitude * std::cos(profile.cos_frequency * t) *
                                std::sin(profile.sin_frequency * t);
  }
  return 0.0;
}

ProfileExtrema sample_extrema(const ReferenceProfile& profile, const ManeuverProfile& maneuver,
                              double horizon) {
  if (!(horizon > 0.0)) {
    throw GuidanceError(ErrorCode::invalid_config, "sampling horizon must be positive");
  }
  constexpr double rate_hz = 1000.0;
  const auto n = static_cast<long>(std::ceil(horizon * rate_hz));

  ProfileExtrema e;
  e.r_d_min = std::numeric_limits<double>::infinity();
  e.r_d_max = -std::numeric_limits<double>::infinity();
  auto visit = [&](double t) {
    const auto s = eval_reference(profile, t);
    e.r_d_min = std::min(e.r_d_min, s.r_d);
    e.r_d_max = std::max(e.r_d_max, s.r_d);
    e.rdot_d_max = std::max(e.rdot_d_max, std::abs(s.rdot_d));
    e.rddot_d_max = std::max(e.rddot_d_max, std::abs(s.rddot_d));
    e.a_t_max = std::max(e.a_t_max, std::abs(eval_maneuver(maneuver, t)));
  };
  for (long k = 0; k < n; ++k) visit(static_cast<double>(k) / rate_hz);
  visit(horizon);
  return e;
}

double disturbance_bound(const ReferenceProfile& profile, const ManeuverProfile& maneuver,
                         double v_p, double v_t, double horizon) {
  const auto e = sample_extrema(profile, maneuver, horizon);
  const double v = v_p + v_t;
  return e.a_t_max + e.r_d_max * v * v + e.rddot_d_max;
}

}  // namespace enclose
