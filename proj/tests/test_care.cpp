#include <doctest.h>

#include <cmath>
#include <random>

#include "enclose/care.hpp"
#include "enclose/errors.hpp"

using namespace enclose;
using namespace enclose::care;

TEST_CASE("scalar probe") {
  Problem<1> pb{Mat<1>::Zero(), Col<1>::Ones(), Mat<1>::Ones(), 1.0};
  const auto r = solve_hamiltonian(pb);
  CHECK(r.P(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.K(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.closed_loop_eigs(0).real() == doctest::Approx(-1.0));
}

TEST_CASE("double integrator oracle") {
  Problem<2> pb;
  pb.A << 0, 1, 0, 0;
  pb.B << 0, 1;
  pb.Q = Mat<2>::Identity();
  pb.R = 1.0;
  Mat<2> expect;
  expect << std::sqrt(3.0), 1, 1, std::sqrt(3.0);

  // the oracle itself satisfies the equation
  CHECK(relative_residual(pb, expect) < 1e-15);

  const auto r = solve_hamiltonian(pb);
  CHECK((r.P - expect).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.residual < 1e-12);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.closed_loop_eigs(i).real() == doctest::Approx(-std::sqrt(3.0) / 2));
    CHECK(std::abs(r.closed_loop_eigs(i).imag()) == doctest::Approx(0.5));
  }

  Mat<2> P0;
  P0 << 10, 3, 3, 10;
  const auto nk = solve_newton_kleinman(pb, P0, 1e-12, 50);
  REQUIRE(nk.has_value());
  CHECK((nk->P - expect).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(nk->method == Method::newton_kleinman);
}

TEST_CASE("Lyapunov solve against its defining equation") {
  Mat<3> A;
  A << -1, 2, 0, 0, -3, 1, 0.5, 0, -2;
  Mat<3> Q;
  Q << 2, 0.3, 0, 0.3, 1, 0.1, 0, 0.1, 4;
  const auto X = solve_lyapunov<3>(A, Q);
  REQUIRE(X.has_value());
  CHECK((A.transpose() * *X + *X * A + Q).norm() < 1e-12);

  // eigenvalues +1 and -1 sum to zero: singular operator
  Mat<2> S;
  S << 1, 0, 0, -1;
  CHECK_FALSE(solve_lyapunov<2>(S, Mat<2>::Identity()).has_value());
}

TEST_CASE("imaginary-axis Hamiltonian eigenvalues are singular geometry") {
  Problem<1> pb{Mat<1>::Zero(), Col<1>::Ones(), Mat<1>::Zero(), 1.0};
  try {
    solve_hamiltonian(pb);
    FAIL("expected an exception");
  } catch (const GuidanceError& e) {
    CHECK(e.code() == ErrorCode::singular_geometry);
  }
}

TEST_CASE("unstabilizable pair is rejected") {
  Problem<2> pb;
  pb.A << 1, 0, 0, -1;
  pb.B << 0, 1;
  pb.Q = Mat<2>::Identity();
  pb.R = 1.0;
  CHECK_THROWS_AS(solve_hamiltonian(pb), GuidanceError);
}

TEST_CASE("Newton-Kleinman refuses a non-stabilizing start") {
  Problem<1> pb{Mat<1>::Constant(1.0), Col<1>::Ones(), Mat<1>::Ones(), 1.0};
  CHECK_FALSE(solve_newton_kleinman(pb, Mat<1>(Mat<1>::Zero())).has_value());
  const auto ok = solve_newton_kleinman(pb, Mat<1>(Mat<1>::Constant(5.0)));
  REQUIRE(ok.has_value());
  CHECK(ok->P(0, 0) == doctest::Approx(1 + std::sqrt(2.0)));
}

TEST_CASE("random stabilizable problems: both routes agree and stabilize") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Problem<3> pb;
    for (int i = 0; i < 3; ++i) {
      pb.B(i) = n(rng);
      for (int j = 0; j < 3; ++j) pb.A(i, j) = n(rng);
    }
    Mat<3> M;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = n(rng);
    pb.Q = M * M.transpose() + 0.1 * Mat<3>::Identity();
    pb.R = std::exp(n(rng));
    Result<3> r;
    try {
      r = solve_hamiltonian(pb);
    } catch (const GuidanceError&) {
      continue;  // nearly uncontrollable draw
    }
    ++checked;
    CHECK(r.residual <= 1e-8);
    CHECK(r.spectral_abscissa() < 0);
    CHECK((r.P - r.P.transpose()).norm() <= 1e-10 * r.P.norm());
    CHECK(Eigen::SelfAdjointEigenSolver<Mat<3>>(r.P).eigenvalues().minCoeff() > -1e-9 * r.P.norm());

    // warm start from a perturbed, still stabilizing guess
    const Mat<3> P0 = 1.5 * r.P;
    const auto nk = solve_newton_kleinman(pb, P0);
    if (nk) {
      CHECK((nk->P - r.P).norm() / r.P.norm() <= 1e-6);
    }
  }
  CHECK(checked > 150);
}
