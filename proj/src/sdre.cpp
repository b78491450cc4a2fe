#include "enclose/sdre.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "enclose/errors.hpp"

namespace enclose {

SdcSystem build_sdc(const RelativeState& rel, const ReferenceSample& ref, double eta,
                    const Weights& weights, const SdcOptions& opts) {
  if (!(std::abs(eta) >= sdre::kEtaFloor)) {
    std::ostringstream msg;
    msg << "auxiliary state |eta| = " << std::abs(eta) << " below floor " << sdre::kEtaFloor;
    throw GuidanceError(ErrorCode::auxiliary_state_collapse, msg.str());
  }
  SdcSystem sys;
  sys.theta_dot = rel.theta_dot();
  const double w2 = sys.theta_dot * sys.theta_dot;
  sys.g = ref.r_d * w2 - ref.rddot_d;
  sys.G_entry = opts.curvature_known ? sys.g / eta : 0.0;

  sys.A(0, 1) = 1.0;
  sys.A(1, 0) = w2;
  sys.A(1, 2) = sys.G_entry;
  sys.A(2, 2) = -weights.lambda;

  double s = std::sin(rel.sigma_p);
  if (opts.min_abs_sine > 0.0 && std::abs(s) < opts.min_abs_sine) {
    s = (s < 0.0 ? -1.0 : 1.0) * opts.min_abs_sine;
  }
  sys.B(1) = s;
  return sys;
}

Eigen::Vector2d sdc_drift(const SdcSystem& sys, const AugmentedState& x) {
  return {x.rho_dot, x.rho * sys.theta_dot * sys.theta_dot + sys.g};
}

care::Problem<3> care_problem(const SdcSystem& sys, const Weights& weights) {
  return {sys.A, sys.B, sys.C.transpose() * weights.Q * sys.C, weights.R};
}

namespace {

CareSolution from_result(const care::Result<3>& r) {
  CareSolution sol;
  sol.P = r.P;
  sol.K = r.K;
  sol.residual_norm = r.residual;
  sol.closed_loop_eigs = r.closed_loop_eigs;
  sol.method = r.method;
  sol.iterations = r.iterations;
  return sol;
}

}  // namespace

CareSolution solve_care(const SdcSystem& sys, const Weights& weights,
                        const std::optional<Eigen::Matrix3d>& warm_start) {
  const auto pb = care_problem(sys, weights);
  if (warm_start) {
    if (auto r = care::solve_newton_kleinman<3>(pb, *warm_start, sdre::kResidualTolerance)) {
      return from_result(*r);
    }
  }
  if (std::abs(sys.B(1)) < sdre::kSingularSine) {
    throw GuidanceError(ErrorCode::singular_geometry,
                        "input singularity: |sin(sigma_P)| below threshold");
  }
  auto sol = from_result(care::solve_hamiltonian<3>(pb, sdre::kResidualTolerance));
  if (!(sol.spectral_abscissa() < 0.0)) {
    throw GuidanceError(ErrorCode::singular_geometry, "Riccati solution is not stabilizing",
                        sol.residual_norm);
  }
  return sol;
}

CareSolution RiccatiTracker::solve(const SdcSystem& sys, const Weights& weights) {
  auto sol = solve_care(sys, weights, last_);
  if (sol.method == care::Method::newton_kleinman) {
    ++warm_;
  } else {
    ++cold_;
  }
  last_ = sol.P;
  return sol;
}

double nominal_accel(const CareSolution& sol, const SdcSystem& sys, const AugmentedState& x,
                     const Weights& weights) {
  return -(sys.B.transpose() * sol.P * x.vec()).value() / weights.R;
}

Eigen::Matrix<double, 2, 3> output_controllability_matrix(const SdcSystem& sys) {
  Eigen::Matrix<double, 2, 3> Oc;
  const Eigen::Vector3d AB = sys.A * sys.B;
  Oc.col(0) = sys.C * sys.B;
  Oc.col(1) = sys.C * AB;
  Oc.col(2) = sys.C * (sys.A * AB);
  return Oc;
}

Eigen::Matrix3d psd_sqrt(const Eigen::Matrix3d& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (M + M.transpose()));
  const Eigen::Vector3d d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::Matrix<double, 9, 3> state_detectability_matrix(const SdcSystem& sys,
                                                        const Weights& weights) {
  const Eigen::Matrix3d Qh = psd_sqrt(sys.C.transpose() * weights.Q * sys.C);
  Eigen::Matrix<double, 9, 3> Oo;
  Oo.topRows<3>() = Qh;
  Oo.middleRows<3>(3) = Qh * sys.A;
  Oo.bottomRows<3>() = Qh * sys.A * sys.A;
  return Oo;
}

int numerical_rank(const Eigen::MatrixXd& M, double rel_tol, double abs_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = std::max(rel_tol * sv(0), abs_tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

int output_controllability_rank(const SdcSystem& sys) {
  return numerical_rank(output_controllability_matrix(sys));
}

int state_detectability_rank(const SdcSystem& sys, const Weights& weights) {
  return numerical_rank(state_detectability_matrix(sys, weights));
}

}  // namespace enclose
