#include "enclose/care.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "enclose/errors.hpp"

namespace enclose::care {

namespace {

// Polishing target; accepted solutions only need `tol`.
constexpr double kPolishTarget = 1e-13;

template <int N>
Mat<N> symmetrize(const Mat<N>& P) {
  return 0.5 * (P + P.transpose());
}

template <int N>
Result<N> finish(const Problem<N>& pb, const Mat<N>& P, double residual, int iterations,
                 Method method) {
  Result<N> out;
  out.P = P;
  out.K = (pb.B.transpose() * P) / pb.R;
  out.residual = residual;
  const Mat<N> Acl = pb.A - pb.B * out.K;
  out.closed_loop_eigs = Eigen::EigenSolver<Mat<N>>(Acl, false).eigenvalues();
  out.iterations = iterations;
  out.method = method;
  return out;
}

template <int N>
bool is_hurwitz(const Mat<N>& M) {
  return Eigen::EigenSolver<Mat<N>>(M, false).eigenvalues().real().maxCoeff() < 0.0;
}

// Runs Newton-Kleinman from a stabilizing P. Returns the best iterate and
// its residual, or nullopt if a Lyapunov solve fails.
template <int N>
std::optional<std::pair<Mat<N>, int>> newton_polish(const Problem<N>& pb, Mat<N> P,
                                                    double& residual, int max_iterations) {
  int it = 0;
  for (; it < max_iterations && residual > kPolishTarget; ++it) {
    const Row<N> K = (pb.B.transpose() * P) / pb.R;
    const Mat<N> Acl = pb.A - pb.B * K;
    const Mat<N> rhs = pb.Q + pb.R * K.transpose() * K;
    auto next = solve_lyapunov<N>(Acl, rhs);
    if (!next) return std::nullopt;
    const double next_residual = relative_residual<N>(pb, *next);
    if (!std::isfinite(next_residual)) return std::nullopt;
    if (next_residual >= residual) break;  // at the roundoff floor
    const bool slow = next_residual > 0.5 * residual;
    P = *next;
    residual = next_residual;
    if (slow) break;
  }
  return std::pair{P, it};
}

}  // namespace

template <int N>
double relative_residual(const Problem<N>& pb, const Mat<N>& P) {
  const Col<N> PB = P * pb.B;
  const Mat<N> res = pb.A.transpose() * P + P * pb.A - (PB * PB.transpose()) / pb.R + pb.Q;
  return res.norm() / std::max(1.0, pb.Q.norm());
}

template <int N>
std::optional<Mat<N>> solve_lyapunov(const Mat<N>& A, const Mat<N>& Q) {
  constexpr int NN = N * N;
  using Big = Eigen::Matrix<double, NN, NN>;
  const Mat<N> At = A.transpose();
  const Mat<N> I = Mat<N>::Identity();
  Big M;
  // vec(A^T X) = (I kron A^T) vec X ; vec(X A) = (A^T kron I) vec X
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      M.template block<N, N>(i * N, j * N) = I(i, j) * At + At(i, j) * I;
    }
  }
  Eigen::FullPivLU<Big> lu(M);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::Matrix<double, NN, 1> rhs =
      -Eigen::Map<const Eigen::Matrix<double, NN, 1>>(Q.data());
  const Eigen::Matrix<double, NN, 1> x = lu.solve(rhs);
  Mat<N> X = Eigen::Map<const Mat<N>>(x.data());
  if (!X.allFinite()) return std::nullopt;
  return symmetrize<N>(X);
}

template <int N>
Result<N> solve_hamiltonian(const Problem<N>& pb, double tol) {
  using H = Eigen::Matrix<double, 2 * N, 2 * N>;
  H ham;
  ham.template topLeftCorner<N, N>() = pb.A;
  ham.template topRightCorner<N, N>() = -(pb.B * pb.B.transpose()) / pb.R;
  ham.template bottomLeftCorner<N, N>() = -pb.Q;
  ham.template bottomRightCorner<N, N>() = -pb.A.transpose();

  Eigen::ComplexEigenSolver<H> es(ham, true);
  if (es.info() != Eigen::Success) {
    throw GuidanceError(ErrorCode::solver_failure, "Hamiltonian eigendecomposition failed");
  }
  const auto& lambda = es.eigenvalues();
  const double scale = std::max(1.0, ham.cwiseAbs().maxCoeff());
  std::vector<int> stable;
  for (int i = 0; i < 2 * N; ++i) {
    const double re = lambda(i).real();
    if (std::abs(re) <= 1e-14 * scale) {
      throw GuidanceError(ErrorCode::singular_geometry,
                          "Hamiltonian has eigenvalues on the imaginary axis "
                          "(pair not stabilizable or not detectable)");
    }
    if (re < 0.0) stable.push_back(i);
  }
  if (static_cast<int>(stable.size()) != N) {
    throw GuidanceError(ErrorCode::solver_failure, "stable subspace has wrong dimension");
  }

  Eigen::Matrix<std::complex<double>, N, N> U1, U2;
  for (int c = 0; c < N; ++c) {
    const auto v = es.eigenvectors().col(stable[c]);
    U1.col(c) = v.template head<N>();
    U2.col(c) = v.template tail<N>();
  }
  Eigen::FullPivLU<Eigen::Matrix<std::complex<double>, N, N>> lu(U1);
  if (!lu.isInvertible()) {
    throw GuidanceError(ErrorCode::singular_geometry, "stable subspace basis is singular");
  }
  // P U1 = U2
  const Mat<N> P0 = symmetrize<N>((U2 * lu.inverse()).real().eval());

  double residual = relative_residual<N>(pb, P0);
  Mat<N> P = P0;
  int iterations = 0;
  if (is_hurwitz<N>(pb.A - pb.B * ((pb.B.transpose() * P0) / pb.R))) {
    if (auto polished = newton_polish<N>(pb, P0, residual, 8)) {
      P = polished->first;
      iterations = polished->second;
    } else {
      residual = relative_residual<N>(pb, P0);
    }
  }
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "Riccati residual " << residual << " exceeds tolerance " << tol;
    throw GuidanceError(ErrorCode::solver_failure, msg.str(), residual);
  }
  return finish<N>(pb, P, residual, iterations, Method::hamiltonian);
}

template <int N>
std::optional<Result<N>> solve_newton_kleinman(const Problem<N>& pb, const Mat<N>& P0,
                                               double tol, int max_iterations) {
  const Mat<N> P = symmetrize<N>(P0);
  if (!P.allFinite()) return std::nullopt;
  if (!is_hurwitz<N>(pb.A - pb.B * ((pb.B.transpose() * P) / pb.R))) return std::nullopt;
  double residual = relative_residual<N>(pb, P);
  auto polished = newton_polish<N>(pb, P, residual, max_iterations);
  if (!polished || !(residual <= tol)) return std::nullopt;
  auto out = finish<N>(pb, polished->first, residual, polished->second, Method::newton_kleinman);
  if (!(out.spectral_abscissa() < 0.0)) return std::nullopt;
  return out;
}

template double relative_residual<1>(const Problem<1>&, const Mat<1>&);
template double relative_residual<2>(const Problem<2>&, const Mat<2>&);
template double relative_residual<3>(const Problem<3>&, const Mat<3>&);
template std::optional<Mat<1>> solve_lyapunov<1>(const Mat<1>&, const Mat<1>&);
template std::optional<Mat<2>> solve_lyapunov<2>(const Mat<2>&, const Mat<2>&);
template std::optional<Mat<3>> solve_lyapunov<3>(const Mat<3>&, const Mat<3>&);
template Result<1> solve_hamiltonian<1>(const Problem<1>&, double);
template Result<2> solve_hamiltonian<2>(const Problem<2>&, double);
template Result<3> solve_hamiltonian<3>(const Problem<3>&, double);
template std::optional<Result<1>> solve_newton_kleinman<1>(const Problem<1>&, const Mat<1>&,
                                                           double, int);
template std::optional<Result<2>> solve_newton_kleinman<2>(const Problem<2>&, const Mat<2>&,
                                                           double, int);
template std::optional<Result<3>> solve_newton_kleinman<3>(const Problem<3>&, const Mat<3>&,
                                                           double, int);

}  // namespace enclose::care
