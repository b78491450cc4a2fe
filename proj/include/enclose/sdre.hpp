#pragma once

// Pseudo-linear (state-dependent coefficient) model of the range-error
// dynamics, augmented with a decaying auxiliary state eta that carries the
// non-vanishing curvature offset g(x) = r_d theta_dot^2 - rddot_d:
//
//   x~ = [rho, rho_dot, eta]
//   A(x~) = [[0, 1, 0], [theta_dot^2, 0, g/eta], [0, 0, -Lambda]]
//   B(x~) = [0, sin(sigma_P), 0]^T,   C = [I2 0]
//
// The nominal command is a_Pn = -R^-1 B^T P(x~) x~ with P the stabilizing
// solution of the pointwise Riccati equation.

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "enclose/care.hpp"
#include "enclose/kinematics.hpp"
#include "enclose/reference.hpp"

namespace enclose {

namespace sdre {
inline constexpr double kEtaFloor = 1e-3;
inline constexpr double kSingularSine = 1e-3;  // |sin sigma_P| below this is singular
inline constexpr double kRankTolerance = 1e-9;  // relative to the largest singular value
inline constexpr double kResidualTolerance = 1e-8;
}  // namespace sdre

struct AugmentedState {
  double rho = 0.0;
  double rho_dot = 0.0;
  double eta = 1.0;

  Eigen::Vector3d vec() const { return {rho, rho_dot, eta}; }
};

struct Weights {
  Eigen::Matrix2d Q = Eigen::Vector2d(1e8, 1e8).asDiagonal();
  double R = 4e4;
  double lambda = 0.01;  // auxiliary decay rate [1/s]
};

struct SdcSystem {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d B = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 2, 3> C = (Eigen::Matrix<double, 2, 3>() << 1, 0, 0, 0, 1, 0).finished();
  double g = 0.0;        // r_d theta_dot^2 - rddot_d
  double G_entry = 0.0;  // g / eta, or 0 when the curvature is treated as unknown
  double theta_dot = 0.0;
};

struct SdcOptions {
  /// When false the g/eta column is dropped and g becomes part of the
  /// unmodeled disturbance.
  bool curvature_known = true;
  /// If positive, |B[1]| is clamped to at least this value (sign kept,
  /// sign(0) taken as +1).
  double min_abs_sine = 0.0;
};

/// Throws GuidanceError(auxiliary_state_collapse) if |eta| < kEtaFloor.
SdcSystem build_sdc(const RelativeState& rel, const ReferenceSample& ref, double eta,
                    const Weights& weights, const SdcOptions& opts = {});

/// The drift f(x) = [rho_dot, rho theta_dot^2 + g]^T of the unaugmented model.
Eigen::Vector2d sdc_drift(const SdcSystem& sys, const AugmentedState& x);

struct CareSolution {
  Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
  Eigen::RowVector3d K = Eigen::RowVector3d::Zero();  // R^-1 B^T P
  double residual_norm = 0.0;
  Eigen::Vector3cd closed_loop_eigs = Eigen::Vector3cd::Zero();
  care::Method method = care::Method::hamiltonian;
  int iterations = 0;

  double spectral_abscissa() const { return closed_loop_eigs.real().maxCoeff(); }
  Eigen::Matrix3d closed_loop(const SdcSystem& sys) const { return sys.A - sys.B * K; }
};

care::Problem<3> care_problem(const SdcSystem& sys, const Weights& weights);

/// Stabilizing solution of the pointwise Riccati equation. With a warm start
/// Newton-Kleinman is tried first; the Hamiltonian solve is the fallback.
/// Throws GuidanceError(singular_geometry) when |sin sigma_P| < kSingularSine
/// and no warm start is given, or when no stabilizing solution exists;
/// GuidanceError(solver_failure) when the residual cannot be brought below
/// kResidualTolerance.
CareSolution solve_care(const SdcSystem& sys, const Weights& weights,
                        const std::optional<Eigen::Matrix3d>& warm_start = std::nullopt);

/// Warm-start cache for one simulation. Not shareable across runs.
class RiccatiTracker {
 public:
  CareSolution solve(const SdcSystem& sys, const Weights& weights);
  void reset() { last_.reset(); }

  long warm_solves() const { return warm_; }
  long cold_solves() const { return cold_; }

 private:
  std::optional<Eigen::Matrix3d> last_;
  long warm_ = 0;
  long cold_ = 0;
};

/// a_Pn = -(1/R) B^T P x~
double nominal_accel(const CareSolution& sol, const SdcSystem& sys, const AugmentedState& x,
                     const Weights& weights);

/// [C B, C A B, C A^2 B]
Eigen::Matrix<double, 2, 3> output_controllability_matrix(const SdcSystem& sys);
/// [Qh; Qh A; Qh A^2] with Qh the principal square root of C^T Q C.
Eigen::Matrix<double, 9, 3> state_detectability_matrix(const SdcSystem& sys,
                                                        const Weights& weights);

/// Singular values at or below max(rel_tol * sigma_max, abs_tol) count as
/// zero. The absolute floor makes B = O(1e-16) (sin(pi) in floating point)
/// rank deficient even though its singular values are relatively balanced.
int numerical_rank(const Eigen::MatrixXd& M, double rel_tol = sdre::kRankTolerance,
                   double abs_tol = sdre::kRankTolerance);
int output_controllability_rank(const SdcSystem& sys);
int state_detectability_rank(const SdcSystem& sys, const Weights& weights);

/// Principal square root of a symmetric PSD matrix.
Eigen::Matrix3d psd_sqrt(const Eigen::Matrix3d& M);

}  // namespace enclose
