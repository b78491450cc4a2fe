#pragma once

// Integral sliding manifold with a supertwisting disturbance-rejection term.
//
//   S_dot = L (y_dot - C (A - M P) x~),   M = B R^-1 B^T
//   a_Pd  = (L C B)^-1 (-alpha1 |S|^beta sign(S) + w)
//   w_dot = -alpha2 sign(S)
//
// S and w both start at zero, so there is no reaching phase. In the
// simulator the nominal input inside a step is the held command.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

#include "enclose/sdre.hpp"

namespace enclose {

struct SlidingState {
  double s = 0.0;  // manifold value [m/s]
  double w = 0.0;  // supertwisting integral state [m/s^2]
};

struct StGains {
  double alpha1 = 10.0;
  double alpha2 = 10.0;
  double beta = 0.5;
  Eigen::RowVector2d L = Eigen::RowVector2d(0.0, 1.0);
};

struct GainReport {
  std::array<std::complex<double>, 2> psi_eigs{};
  bool gains_positive = false;
  bool beta_in_range = false;
  bool hurwitz = false;

  bool ok() const { return gains_positive && beta_in_range && hurwitz; }
  std::string summary() const;
};

/// Psi = [[-alpha1/2, 1/2], [-alpha2, 0]]
Eigen::Matrix2d psi_matrix(const StGains& g);

GainReport check_gains(const StGains& g);
/// Throws GuidanceError(gain_validation) with the eigenvalues of Psi when
/// check_gains fails.
GainReport validate_gains(const StGains& g);

/// L C B, the scalar input gain of the manifold.
double manifold_input_gain(const SdcSystem& sys, const StGains& g);

/// S_dot given the true output derivative y_dot = [rho_dot, rho_ddot].
double manifold_rate(const SdcSystem& sys, const CareSolution& sol, const AugmentedState& x,
                     const Eigen::Vector2d& y_dot, const StGains& g);
/// Same, with the nominal input a_pn held from the last control update and
/// A(x), B(x) taken at the current state.
double manifold_rate(const SdcSystem& sys, const AugmentedState& x, double a_pn,
                     const Eigen::Vector2d& y_dot, const StGains& g);

/// -alpha1 |S|^beta sign(S) + w, before inversion by L C B.
double supertwisting_term(const SlidingState& sl, const StGains& g);

/// Throws GuidanceError(singular_input) if |L C B| < kSingularSine * |L|.
double disturbance_accel(const SlidingState& sl, const SdcSystem& sys, const StGains& g);

/// -alpha2 sign(S), with sign(0) = 0.
double w_rate(const SlidingState& sl, const StGains& g);

}  // namespace enclose
