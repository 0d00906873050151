#include <doctest.h>

#include <cmath>
#include <random>

#include "descriptor/linalg.hpp"

using namespace descriptor;

namespace {

// Taylor series with scaling and squaring; shares nothing with the Pade code.
Matrix taylor_exp(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Matrix x = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Matrix random_matrix(Index n, std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = d(rng);
  return a;
}

}  // namespace

TEST_CASE("matrix exponential matches a Taylor oracle") {
  std::mt19937 rng(7);
  for (double scale : {0.01, 0.5, 2.0, 8.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = random_matrix(4, rng, scale);
      const Matrix e = mat_exp(a);
      const Matrix ref = taylor_exp(a);
      CHECK((e - ref).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("matrix exponential closed forms") {
  const double th = 0.7;
  Matrix rot(2, 2);
  rot << 0, th, -th, 0;
  Matrix ref(2, 2);
  ref << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
  CHECK((mat_exp(rot) - ref).cwiseAbs().maxCoeff() < 1e-14);

  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 1;
  n(1, 2) = 1;
  Matrix en = Matrix::Identity(3, 3) + 2.0 * n;
  en(0, 2) = 2.0;  // t^2 / 2 with t = 2
  CHECK((mat_exp(n, 2.0) - en).cwiseAbs().maxCoeff() < 1e-14);

  CHECK(std::abs(mat_exp(Matrix(Matrix::Constant(1, 1, -1.0)), 3.0)(0, 0) - std::exp(-3.0)) < 1e-15);
  CHECK(mat_exp(Matrix(Matrix::Zero(2, 2))).isIdentity());
}

TEST_CASE("complex exponential of a diagonal") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(0, 1);
  d(1, 1) = Complex(-1, 2);
  const CMatrix e = mat_exp(d, 0.5);
  CHECK(std::abs(e(0, 0) - std::exp(Complex(0, 0.5))) < 1e-15);
  CHECK(std::abs(e(1, 1) - std::exp(Complex(-0.5, 1.0))) < 1e-15);
}

TEST_CASE("exp_integral against closed forms") {
  // Invertible: A^{-1} (e^{A h} - I).
  Matrix a(2, 2);
  a << -1, 2, 0, -3;
  const double h = 0.4;
  const Matrix ref = a.inverse() * (taylor_exp(a * h) - Matrix::Identity(2, 2));
  CHECK((exp_integral(to_complex(a), h).real() - ref).cwiseAbs().maxCoeff() < 1e-14);

  // Singular: J = [[0,1],[0,0]] integrates to [[h, h^2/2],[0, h]].
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1;
  Matrix ref_j(2, 2);
  ref_j << h, h * h / 2, 0, h;
  CHECK((exp_integral(to_complex(j), h).real() - ref_j).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rank and nullspace in float and exact arithmetic") {
  Matrix a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  const auto r = rank_and_nullspace<double>(a);
  CHECK(r.rank == 2);
  REQUIRE(r.null_basis.cols() == 1);
  CHECK((a * r.null_basis).cwiseAbs().maxCoeff() < 1e-12);

  const auto re = rank_and_nullspace<Rational>(to_exact(a));
  CHECK(re.rank == 2);
  CHECK((to_exact(a) * re.null_basis).isZero());

  CHECK(rank_and_nullspace<double>(Matrix::Zero(2, 3)).rank == 0);
  CHECK(rank_and_nullspace<double>(Matrix::Identity(4, 4)).rank == 4);

  // A 1e-14 perturbation is below the default relative tolerance.
  Matrix near = a;
  near(1, 2) += 1e-14;
  CHECK(rank_and_nullspace<double>(near).rank == 2);
}

TEST_CASE("nilpotency index") {
  Matrix n = Matrix::Zero(3, 3);
  n(0, 1) = 1;
  n(1, 2) = 1;
  CHECK(nilpotency_index<double>(n) == 3);
  CHECK(nilpotency_index<double>(Matrix::Zero(2, 2)) == 1);
  CHECK(nilpotency_index<Rational>(to_exact(n)) == 3);
  CHECK_THROWS_AS(nilpotency_index<double>(Matrix::Identity(2, 2)), Error);
  try {
    nilpotency_index<double>(Matrix::Identity(2, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNilpotent);
  }
}

TEST_CASE("linear solves and inverses") {
  Matrix a(2, 2);
  a << 4, 1, 2, 3;
  Matrix b(2, 1);
  b << 1, 2;
  const Matrix x = solve_linear<double>(a, b);
  CHECK((a * x - b).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((inverse<double>(a) * a - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(determinant<double>(a) - 10.0) < 1e-13);

  Matrix s(2, 2);
  s << 1, 2, 2, 4;
  try {
    solve_linear<double>(s, b);
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMatrix);
  }
  CHECK(matrix_power<double>(a, 3).isApprox(a * a * a));
  CHECK(matrix_power<double>(a, 0).isIdentity());
}

TEST_CASE("real part extraction rejects imaginary residue") {
  CMatrix z = CMatrix::Zero(1, 2);
  z(0, 0) = Complex(1.0, 1e-14);
  CHECK(real_part_checked(z, 1e-8, "z")(0, 0) == 1.0);
  z(0, 1) = Complex(0.0, 1e-3);
  CHECK_THROWS_AS(real_part_checked(z, 1e-8, "z"), Error);
}
