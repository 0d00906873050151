#include "descriptor/linalg.hpp"

#include <cmath>
#include <string>

namespace descriptor {

void Tolerance::validate() const {
  if (!(rank_tol > 0.0) || !(residual_tol > 0.0) || !std::isfinite(rank_tol) || !std::isfinite(residual_tol))
    throw Error(ErrorCode::InvalidArgument, "tolerances must be finite and strictly positive");
}

void require_square(Index rows, Index cols, const char* what) {
  if (rows != cols)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square, got " + std::to_string(rows) +
                                                  "x" + std::to_string(cols));
}

namespace {

template <class Scalar>
struct Reduced {
  MatrixOf<Scalar> r;
  std::vector<Index> pivots;
};

// Gauss-Jordan on the first `pivot_cols` columns; remaining columns ride along.
template <class Scalar>
Reduced<Scalar> gauss_jordan(MatrixOf<Scalar> a, Index pivot_cols, double threshold) {
  using Traits = ScalarTraits<Scalar>;
  Reduced<Scalar> out;
  const Index rows = a.rows();
  Index row = 0;
  for (Index col = 0; col < pivot_cols && row < rows; ++col) {
    Index best = -1;
    double best_mag = 0.0;
    for (Index i = row; i < rows; ++i) {
      double mag = Traits::magnitude(a(i, col));
      if constexpr (Traits::exact) {
        if (!(a(i, col) == Scalar(0))) {
          best = i;
          break;
        }
      } else if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best < 0) continue;
    if constexpr (!Traits::exact) {
      if (best_mag <= threshold) continue;
    }
    if (best != row) a.row(best).swap(a.row(row));
    const Scalar pivot = a(row, col);
    for (Index j = col; j < a.cols(); ++j) a(row, j) = a(row, j) / pivot;
    for (Index i = 0; i < rows; ++i) {
      if (i == row) continue;
      const Scalar factor = a(i, col);
      if (factor == Scalar(0)) continue;
      for (Index j = col; j < a.cols(); ++j) a(i, j) -= factor * a(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.r = std::move(a);
  return out;
}

template <class Scalar>
double pivot_threshold(const MatrixOf<Scalar>& a, const Tolerance& tol, double scale) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return 0.0;
  } else {
    return tol.rank_tol * (scale >= 0.0 ? scale : max_abs<Scalar>(a));
  }
}

}  // namespace

template <class Scalar>
RankResult<Scalar> rank_and_nullspace(const MatrixOf<Scalar>& a, const Tolerance& tol, double scale) {
  const Index cols = a.cols();
  auto reduced = gauss_jordan<Scalar>(a, cols, pivot_threshold<Scalar>(a, tol, scale));
  RankResult<Scalar> out;
  out.rank = static_cast<Index>(reduced.pivots.size());
  out.pivot_columns = reduced.pivots;

  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (Index c : reduced.pivots) is_pivot[static_cast<size_t>(c)] = true;
  out.null_basis = MatrixOf<Scalar>::Zero(cols, cols - out.rank);
  Index k = 0;
  for (Index f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<size_t>(f)]) continue;
    out.null_basis(f, k) = Scalar(1);
    for (size_t i = 0; i < reduced.pivots.size(); ++i)
      out.null_basis(reduced.pivots[i], k) = -reduced.r(static_cast<Index>(i), f);
    ++k;
  }
  return out;
}

template <class Scalar>
int nilpotency_index(const MatrixOf<Scalar>& n, const Tolerance& tol) {
  require_square(n.rows(), n.cols(), "nilpotency_index argument");
  const Index size = n.rows();
  const double base = std::max(1.0, max_abs<Scalar>(n));
  MatrixOf<Scalar> power = n;
  for (Index k = 1; k <= std::max<Index>(size, 1); ++k) {
    bool zero;
    if constexpr (ScalarTraits<Scalar>::exact) {
      zero = true;
      for (Index j = 0; j < power.cols() && zero; ++j)
        for (Index i = 0; i < power.rows() && zero; ++i) zero = power(i, j).is_zero();
    } else {
      zero = max_abs<Scalar>(power) <= tol.rank_tol * std::pow(base, static_cast<double>(k));
    }
    if (zero) return static_cast<int>(k);
    power = (power * n).eval();
  }
  throw Error(ErrorCode::NotNilpotent, "matrix power N^" + std::to_string(size) + " is not zero");
}

template <class Scalar>
MatrixOf<Scalar> solve_linear(const MatrixOf<Scalar>& a, const MatrixOf<Scalar>& b, const Tolerance& tol) {
  require_square(a.rows(), a.cols(), "coefficient matrix");
  if (b.rows() != a.rows())
    throw Error(ErrorCode::DimensionMismatch, "right-hand side has " + std::to_string(b.rows()) + " rows, expected " +
                                                  std::to_string(a.rows()));
  const Index n = a.rows();
  MatrixOf<Scalar> aug(n, n + b.cols());
  aug << a, b;
  auto reduced = gauss_jordan<Scalar>(std::move(aug), n, pivot_threshold<Scalar>(a, tol, -1.0));
  if (static_cast<Index>(reduced.pivots.size()) < n)
    throw Error(ErrorCode::SingularMatrix,
                "rank " + std::to_string(reduced.pivots.size()) + " < " + std::to_string(n));
  return reduced.r.rightCols(b.cols());
}

template <class Scalar>
MatrixOf<Scalar> inverse(const MatrixOf<Scalar>& a, const Tolerance& tol) {
  require_square(a.rows(), a.cols(), "matrix to invert");
  return solve_linear<Scalar>(a, MatrixOf<Scalar>::Identity(a.rows(), a.cols()), tol);
}

template <class Scalar>
Scalar determinant(const MatrixOf<Scalar>& a_in) {
  using Traits = ScalarTraits<Scalar>;
  require_square(a_in.rows(), a_in.cols(), "determinant argument");
  MatrixOf<Scalar> a = a_in;
  const Index n = a.rows();
  Scalar det(1);
  for (Index col = 0; col < n; ++col) {
    Index best = -1;
    double best_mag = -1.0;
    for (Index i = col; i < n; ++i) {
      if constexpr (Traits::exact) {
        if (!(a(i, col) == Scalar(0))) {
          best = i;
          break;
        }
      } else {
        double mag = Traits::magnitude(a(i, col));
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
    }
    if (best < 0 || a(best, col) == Scalar(0)) return Scalar(0);
    if (best != col) {
      a.row(best).swap(a.row(col));
      det = -det;
    }
    const Scalar pivot = a(col, col);
    det = det * pivot;
    for (Index i = col + 1; i < n; ++i) {
      const Scalar factor = a(i, col) / pivot;
      if (factor == Scalar(0)) continue;
      for (Index j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
    }
  }
  return det;
}

template <class Scalar>
MatrixOf<Scalar> matrix_power(const MatrixOf<Scalar>& a, int k) {
  require_square(a.rows(), a.cols(), "matrix_power argument");
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative matrix power");
  MatrixOf<Scalar> out = MatrixOf<Scalar>::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = (out * a).eval();
  return out;
}

#define DESCRIPTOR_INSTANTIATE(S)                                                                  \
  template RankResult<S> rank_and_nullspace<S>(const MatrixOf<S>&, const Tolerance&, double);      \
  template int nilpotency_index<S>(const MatrixOf<S>&, const Tolerance&);                          \
  template MatrixOf<S> solve_linear<S>(const MatrixOf<S>&, const MatrixOf<S>&, const Tolerance&);  \
  template MatrixOf<S> inverse<S>(const MatrixOf<S>&, const Tolerance&);                           \
  template S determinant<S>(const MatrixOf<S>&);                                                   \
  template MatrixOf<S> matrix_power<S>(const MatrixOf<S>&, int);

DESCRIPTOR_INSTANTIATE(double)
DESCRIPTOR_INSTANTIATE(Complex)
DESCRIPTOR_INSTANTIATE(Rational)
#undef DESCRIPTOR_INSTANTIATE

// ---------------------------------------------------------------------------
// Matrix exponential

namespace {

// Pade coefficients b_0..b_m of the [m/m] approximant to exp.
constexpr double kPade3[] = {120.0, 60.0, 12.0, 1.0};
constexpr double kPade5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr double kPade7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr double kPade9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                             2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr double kPade13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                              1187353796428800.0,  129060195264000.0,   10559470521600.0,
                              670442572800.0,      33522128640.0,       1323241920.0,
                              40840800.0,          960960.0,            16380.0,
                              182.0,               1.0};

// 1-norm bounds below which the [m/m] approximant is accurate to unit roundoff.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <class Mat>
void pade_low(const Mat& a, const double* b, int degree, Mat& u, Mat& v) {
  const Index n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat even_power = ident;
  Mat odd_sum = b[1] * ident;
  Mat even_sum = b[0] * ident;
  for (int k = 2; k <= degree; k += 2) {
    even_power = (even_power * a2).eval();
    even_sum += b[k] * even_power;
    if (k + 1 <= degree) odd_sum += b[k + 1] * even_power;
  }
  u = a * odd_sum;
  v = even_sum;
}

template <class Mat>
void pade13(const Mat& a, Mat& u, Mat& v) {
  const Index n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const double* b = kPade13;
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat odd = a6 * tmp + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u = a * odd;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

template <class Mat>
Mat expm_impl(const Mat& a_in, double t) {
  require_square(a_in.rows(), a_in.cols(), "mat_exp argument");
  const Index n = a_in.rows();
  if (n == 0) return a_in;
  Mat a = a_in * t;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw Error(ErrorCode::InvalidArgument, "mat_exp argument is not finite");
  Mat u, v;
  int squarings = 0;
  if (norm1 <= kTheta3) {
    pade_low(a, kPade3, 3, u, v);
  } else if (norm1 <= kTheta5) {
    pade_low(a, kPade5, 5, u, v);
  } else if (norm1 <= kTheta7) {
    pade_low(a, kPade7, 7, u, v);
  } else if (norm1 <= kTheta9) {
    pade_low(a, kPade9, 9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
    a /= std::ldexp(1.0, squarings);
    pade13(a, u, v);
  }
  Mat result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = (result * result).eval();
  return result;
}

}  // namespace

Matrix mat_exp(const Matrix& a, double t) { return expm_impl(a, t); }
CMatrix mat_exp(const CMatrix& a, double t) { return expm_impl(a, t); }

CMatrix exp_integral(const CMatrix& a, double h) {
  require_square(a.rows(), a.cols(), "exp_integral argument");
  const Index n = a.rows();
  CMatrix aug = CMatrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n) = CMatrix::Identity(n, n);
  return mat_exp(aug, h).topRightCorner(n, n);
}

// ---------------------------------------------------------------------------
// Conversions

RationalMatrix to_exact(const Matrix& a) {
  RationalMatrix out(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(i, j) = Rational::from_double(a(i, j));
  return out;
}

Matrix to_double(const RationalMatrix& a) {
  Matrix out(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) out(i, j) = a(i, j).to_double();
  return out;
}

CMatrix to_complex(const Matrix& a) { return a.cast<Complex>(); }

CMatrix to_complex(const RationalMatrix& a) { return to_double(a).cast<Complex>(); }

Matrix real_part_checked(const CMatrix& a, double rel_tol, const char* what) {
  const double scale = std::max(1.0, max_abs<Complex>(a));
  const double imag = a.size() == 0 ? 0.0 : a.imag().cwiseAbs().maxCoeff();
  if (imag > rel_tol * scale)
    throw Error(ErrorCode::IllConditioned, std::string(what) + " has imaginary residue " + std::to_string(imag));
  return a.real();
}

}  // namespace descriptor
