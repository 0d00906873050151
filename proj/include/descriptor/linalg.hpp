#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "descriptor/errors.hpp"
#include "descriptor/rational.hpp"

namespace descriptor {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <class Scalar>
using MatrixOf = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorOf = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixOf<double>;
using Vector = VectorOf<double>;
using CMatrix = MatrixOf<Complex>;
using CVector = VectorOf<Complex>;
using RationalMatrix = MatrixOf<Rational>;
using RationalVector = VectorOf<Rational>;

/// Thresholds for float-mode decisions. Ignored by exact-mode routines.
struct Tolerance {
  double rank_tol = 1e-10;      ///< pivot threshold, relative to the largest entry
  double residual_tol = 1e-9;   ///< acceptance threshold for verification residuals

  void validate() const;
};

/// Per-scalar behavior for the templated elimination routines.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double magnitude(double x) { return std::abs(x); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static double magnitude(const Complex& x) { return std::abs(x); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double magnitude(const Rational& x) { return abs(x).to_double(); }
};

template <class Scalar>
double max_abs(const MatrixOf<Scalar>& a) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) m = std::max(m, ScalarTraits<Scalar>::magnitude(a(i, j)));
  return m;
}

template <class Scalar>
struct RankResult {
  Index rank = 0;
  MatrixOf<Scalar> null_basis;       ///< cols - rank columns spanning the kernel
  std::vector<Index> pivot_columns;
};

/// Rank and kernel basis by Gauss-Jordan elimination with partial pivoting.
///
/// Float mode treats a pivot as zero when its magnitude is at most
/// rank_tol * scale, where scale defaults to max |entry| of `a`. Pass an
/// explicit `scale` when `a` is a product whose natural size differs from its
/// entries (powers of a nilpotent matrix, for instance). Exact mode tests true
/// zeros and ignores both.
template <class Scalar>
RankResult<Scalar> rank_and_nullspace(const MatrixOf<Scalar>& a, const Tolerance& tol = {},
                                      double scale = -1.0);

/// Smallest k >= 1 with N^k = 0. Float mode compares max |N^k| against
/// rank_tol * max(1, max |N|)^k.
template <class Scalar>
int nilpotency_index(const MatrixOf<Scalar>& n, const Tolerance& tol = {});

/// Solves A x = b for one or more right-hand sides.
/// Throws SingularMatrix when A is rank deficient under `tol`.
template <class Scalar>
MatrixOf<Scalar> solve_linear(const MatrixOf<Scalar>& a, const MatrixOf<Scalar>& b,
                              const Tolerance& tol = {});

template <class Scalar>
MatrixOf<Scalar> inverse(const MatrixOf<Scalar>& a, const Tolerance& tol = {});

template <class Scalar>
Scalar determinant(const MatrixOf<Scalar>& a);

template <class Scalar>
MatrixOf<Scalar> matrix_power(const MatrixOf<Scalar>& a, int k);

template <class Scalar>
MatrixOf<Scalar> direct_sum(const MatrixOf<Scalar>& a, const MatrixOf<Scalar>& b) {
  MatrixOf<Scalar> out = MatrixOf<Scalar>::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// e^{A t} by scaling and squaring with a diagonal Pade approximant
/// (degree 3 through 13, picked from the 1-norm of A t).
Matrix mat_exp(const Matrix& a, double t = 1.0);
CMatrix mat_exp(const CMatrix& a, double t = 1.0);

/// Integral of e^{A s} over s in [0, h], read off the upper-right block of
/// exp([[A, I], [0, 0]] h). Valid for singular A.
CMatrix exp_integral(const CMatrix& a, double h);

RationalMatrix to_exact(const Matrix& a);
Matrix to_double(const RationalMatrix& a);
CMatrix to_complex(const Matrix& a);
CMatrix to_complex(const RationalMatrix& a);

/// Real part of `a`, throwing IllConditioned when some imaginary part exceeds
/// `rel_tol * max(1, max |a|)`.
Matrix real_part_checked(const CMatrix& a, double rel_tol, const char* what);

void require_square(Index rows, Index cols, const char* what);

}  // namespace descriptor
