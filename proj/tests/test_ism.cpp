#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "enclose/errors.hpp"
#include "enclose/ism.hpp"
#include "enclose/simulator.hpp"
#include "st_bench.hpp"

using namespace enclose;
using std::numbers::pi;

namespace {

SdcSystem with_sine(double s) {
  SdcSystem sys;
  sys.B << 0, s, 0;
  return sys;
}

}  // namespace

TEST_CASE("default gains give a Hurwitz Psi") {
  const auto rep = validate_gains(StGains{});
  CHECK(rep.ok());
  CHECK(rep.psi_eigs[0].real() == doctest::Approx(-3.618034).epsilon(1e-6));
  CHECK(rep.psi_eigs[1].real() == doctest::Approx(-1.381966).epsilon(1e-6));
  CHECK(rep.psi_eigs[0].imag() == 0.0);
  // characteristic polynomial lambda^2 + (alpha1/2) lambda + alpha2/2
  for (const auto& l : rep.psi_eigs) CHECK(std::abs(l * l + 5.0 * l + 5.0) < 1e-12);
}

TEST_CASE("bad gains are rejected") {
  StGains g;
  g.alpha1 = 0;
  CHECK_FALSE(check_gains(g).hurwitz);
  CHECK_FALSE(check_gains(g).ok());
  try {
    validate_gains(g);
    FAIL("expected an exception");
  } catch (const GuidanceError& e) {
    CHECK(e.code() == ErrorCode::gain_validation);
    CHECK(std::string(e.what()).find("eig") != std::string::npos);
  }

  g = StGains{};
  g.alpha1 = 2;
  g.alpha2 = -1;
  CHECK_FALSE(check_gains(g).gains_positive);
  CHECK_THROWS_AS(validate_gains(g), GuidanceError);

  g = StGains{};
  g.beta = 1.0;
  CHECK_FALSE(check_gains(g).beta_in_range);
}

TEST_CASE("disturbance command examples") {
  const StGains g;
  CHECK(disturbance_accel({0, 0}, with_sine(1.0), g) == 0.0);
  CHECK(disturbance_accel({1, 0}, with_sine(1.0), g) == doctest::Approx(-10));
  CHECK(disturbance_accel({-4, 2}, with_sine(0.5), g) == doctest::Approx(44));
  try {
    disturbance_accel({1, 0}, with_sine(1e-5), g);
    FAIL("expected an exception");
  } catch (const GuidanceError& e) {
    CHECK(e.code() == ErrorCode::singular_input);
  }
}

TEST_CASE("integral state rate") {
  const StGains g;
  CHECK(w_rate({3, 0}, g) == -10);
  CHECK(w_rate({0, 0}, g) == 0);
  CHECK(w_rate({-0.001, 0}, g) == 10);
}

TEST_CASE("manifold rate") {
  const Weights w;
  const StGains g;
  RelativeState rel;
  rel.r = 82;
  rel.sigma_p = 1.1;
  rel.v_theta = -0.45 * 82;
  const ReferenceSample ref{75, 0, 0};
  const auto sys = build_sdc(rel, ref, 0.9, w);
  const auto sol = solve_care(sys, w);

  CHECK(manifold_rate(sys, sol, {0, 0, 0}, Eigen::Vector2d::Zero(), g) == 0.0);

  const AugmentedState x{7, -3, 0.9};
  const double a_pn = nominal_accel(sol, sys, x, w);
  const double th = rel.theta_dot();
  // plant output derivative with a_P = a_Pn and no target maneuver
  const double rdd = rel.r * th * th + a_pn * std::sin(rel.sigma_p);
  const Eigen::Vector2d y_dot(x.rho_dot, rdd);
  const double scale = std::abs(rel.r * th * th) + std::abs(a_pn);
  CHECK(std::abs(manifold_rate(sys, sol, x, y_dot, g)) <= 1e-6 * scale);
  CHECK(std::abs(manifold_rate(sys, x, a_pn, y_dot, g)) <= 1e-12 * scale);

  // a target maneuver shows up unchanged
  const double a_t = 4.0, gt_minus_theta = 0.8;
  const Eigen::Vector2d y_dot_d(x.rho_dot, rdd - a_t * std::sin(gt_minus_theta));
  CHECK(manifold_rate(sys, sol, x, y_dot_d, g) ==
        doctest::Approx(-a_t * std::sin(gt_minus_theta)).epsilon(1e-6));
}

TEST_CASE("input gain of the manifold") {
  StGains g;
  CHECK(manifold_input_gain(with_sine(0.3), g) == doctest::Approx(0.3));
  g.L << 0, 4;
  CHECK(manifold_input_gain(with_sine(0.3), g) == doctest::Approx(1.2));
}

TEST_CASE("supertwisting bench settles under bounded disturbances") {
  const StGains g;
  const std::vector<std::function<double(double)>> ds = {
      [](double) { return 5.0; },
      [](double) { return -5.0; },
      [](double t) { return 5.0 * std::sin(t); },
      [](double t) { return 5.0 * std::cos(0.5 * t + 1.0); },
      [](double t) { return 3.0 + 2.0 * std::sin(1.5 * t); },
  };
  for (double s0 : {-10.0, -3.0, 0.0, 1.0, 10.0}) {
    for (const auto& d : ds) {
      const auto r = testing::run_st_bench(s0, d, g, 0.05, 5.0);
      CHECK(r.settle_time <= 5.0);
      CHECK(r.max_abs_s_late <= 0.05);
    }
  }
}
