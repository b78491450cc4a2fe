#pragma once

// Continuous algebraic Riccati equation for single-input systems
//
//   A^T P + P A - P B R^-1 B^T P + Q = 0
//
// Two routes are provided. The cold route takes the stable invariant subspace
// of the 2N x 2N Hamiltonian matrix. The warm route runs Newton-Kleinman
// iterations from a stabilizing initial guess. Both symmetrize their output.

#include <Eigen/Dense>
#include <complex>
#include <optional>

namespace enclose::care {

template <int N>
using Mat = Eigen::Matrix<double, N, N>;
template <int N>
using Col = Eigen::Matrix<double, N, 1>;
template <int N>
using Row = Eigen::Matrix<double, 1, N>;

template <int N>
struct Problem {
  Mat<N> A;
  Col<N> B;
  Mat<N> Q;  // state weight, symmetric PSD
  double R;  // input weight, > 0
};

enum class Method { hamiltonian, newton_kleinman };

template <int N>
struct Result {
  Mat<N> P;
  Row<N> K;  // R^-1 B^T P, so the optimal input is -K x
  double residual = 0.0;
  Eigen::Matrix<std::complex<double>, N, 1> closed_loop_eigs;
  int iterations = 0;
  Method method = Method::hamiltonian;

  double spectral_abscissa() const { return closed_loop_eigs.real().maxCoeff(); }
};

/// ||A^T P + P A - P B R^-1 B^T P + Q||_F / max(1, ||Q||_F)
template <int N>
double relative_residual(const Problem<N>& pb, const Mat<N>& P);

/// Solves A^T X + X A + Q = 0. Returns nullopt when the Kronecker operator
/// is singular (A has eigenvalue pairs summing to zero).
template <int N>
std::optional<Mat<N>> solve_lyapunov(const Mat<N>& A, const Mat<N>& Q);

/// Stable-invariant-subspace solve followed by Newton-Kleinman polishing.
/// Throws GuidanceError(singular_geometry) when the Hamiltonian has
/// eigenvalues on the imaginary axis or the subspace basis is singular, and
/// GuidanceError(solver_failure) when the polished residual exceeds `tol`.
template <int N>
Result<N> solve_hamiltonian(const Problem<N>& pb, double tol = 1e-8);

/// Newton-Kleinman iterations from `P0`. Returns nullopt if P0 is not
/// stabilizing, a Lyapunov solve fails, or the residual stalls above `tol`.
template <int N>
std::optional<Result<N>> solve_newton_kleinman(const Problem<N>& pb, const Mat<N>& P0,
                                               double tol = 1e-8, int max_iterations = 12);

extern template double relative_residual<1>(const Problem<1>&, const Mat<1>&);
extern template double relative_residual<2>(const Problem<2>&, const Mat<2>&);
extern template double relative_residual<3>(const Problem<3>&, const Mat<3>&);
extern template std::optional<Mat<1>> solve_lyapunov<1>(const Mat<1>&, const Mat<1>&);
extern template std::optional<Mat<2>> solve_lyapunov<2>(const Mat<2>&, const Mat<2>&);
extern template std::optional<Mat<3>> solve_lyapunov<3>(const Mat<3>&, const Mat<3>&);
extern template Result<1> solve_hamiltonian<1>(const Problem<1>&, double);
extern template Result<2> solve_hamiltonian<2>(const Problem<2>&, double);
extern template Result<3> solve_hamiltonian<3>(const Problem<3>&, double);
extern template std::optional<Result<1>> solve_newton_kleinman<1>(const Problem<1>&,
                                                                  const Mat<1>&, double, int);
extern template std::optional<Result<2>> solve_newton_kleinman<2>(const Problem<2>&,
                                                                  const Mat<2>&, double, int);
extern template std::optional<Result<3>> solve_newton_kleinman<3>(const Problem<3>&,
                                                                  const Mat<3>&, double, int);

}  // namespace enclose::care
