#include "enclose/ism.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "enclose/angles.hpp"
#include "enclose/errors.hpp"

namespace enclose {

std::string GainReport::summary() const {
  std::ostringstream os;
  os << "psi eigenvalues: ";
  for (std::size_t i = 0; i < psi_eigs.size(); ++i) {
    if (i) os << ", ";
    os << psi_eigs[i].real();
    if (psi_eigs[i].imag() != 0.0) {
      os << (psi_eigs[i].imag() < 0 ? " - " : " + ") << std::abs(psi_eigs[i].imag()) << "i";
    }
  }
  if (!gains_positive) os << "; alpha1 and alpha2 must be positive";
  if (!beta_in_range) os << "; beta must lie in (0, 1)";
  if (!hurwitz) os << "; Psi is not Hurwitz";
  return os.str();
}

Eigen::Matrix2d psi_matrix(const StGains& g) {
  Eigen::Matrix2d psi;
  psi << -0.5 * g.alpha1, 0.5, -g.alpha2, 0.0;
  return psi;
}

GainReport check_gains(const StGains& g) {
  GainReport rep;
  const auto eigs = Eigen::EigenSolver<Eigen::Matrix2d>(psi_matrix(g), false).eigenvalues();
  rep.psi_eigs = {eigs(0), eigs(1)};
  if (rep.psi_eigs[0].real() > rep.psi_eigs[1].real()) std::swap(rep.psi_eigs[0], rep.psi_eigs[1]);
  rep.gains_positive = g.alpha1 > 0.0 && g.alpha2 > 0.0;
  rep.beta_in_range = g.beta > 0.0 && g.beta < 1.0;
  rep.hurwitz = eigs.real().maxCoeff() < 0.0;
  return rep;
}

GainReport validate_gains(const StGains& g) {
  auto rep = check_gains(g);
  if (!rep.ok()) {
    throw GuidanceError(ErrorCode::gain_validation, "invalid supertwisting gains: " + rep.summary());
  }
  return rep;
}

double manifold_input_gain(const SdcSystem& sys, const StGains& g) {
  return (g.L * sys.C * sys.B).value();
}

double manifold_rate(const SdcSystem& sys, const CareSolution& sol, const AugmentedState& x,
                     const Eigen::Vector2d& y_dot, const StGains& g) {
  const Eigen::Vector2d nominal = sys.C * (sol.closed_loop(sys) * x.vec());
  return (g.L * (y_dot - nominal)).value();
}

double manifold_rate(const SdcSystem& sys, const AugmentedState& x, double a_pn,
                     const Eigen::Vector2d& y_dot, const StGains& g) {
  const Eigen::Vector2d nominal = sys.C * (sys.A * x.vec() + sys.B * a_pn);
  return (g.L * (y_dot - nominal)).value();
}

double supertwisting_term(const SlidingState& sl, const StGains& g) {
  return -g.alpha1 * std::pow(std::abs(sl.s), g.beta) * signum(sl.s) + sl.w;
}

double disturbance_accel(const SlidingState& sl, const SdcSystem& sys, const StGains& g) {
  const double lcb = manifold_input_gain(sys, g);
  if (!(std::abs(lcb) >= sdre::kSingularSine * g.L.norm())) {
    throw GuidanceError(ErrorCode::singular_input, "L C B is not invertible at this state");
  }
  return supertwisting_term(sl, g) / lcb;
}

double w_rate(const SlidingState& sl, const StGains& g) { return -g.alpha2 * signum(sl.s); }

}  // namespace enclose
