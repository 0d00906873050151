#pragma once

#include <utility>
#include <vector>

#include "descriptor/linalg.hpp"

namespace descriptor {

/// Univariate polynomial with ascending coefficients: c[0] + c[1] s + ...
/// The zero polynomial has no coefficients and degree -1.
template <class Scalar>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(Index degree, Scalar coeff = Scalar(1));
  /// (s - root)
  static Polynomial linear_factor(const Scalar& root);

  const std::vector<Scalar>& coefficients() const { return c_; }
  Index degree() const { return static_cast<Index>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Scalar leading() const { return c_.empty() ? Scalar(0) : c_.back(); }
  Scalar coefficient(Index k) const {
    return k < 0 || k > degree() ? Scalar(0) : c_[static_cast<size_t>(k)];
  }

  Scalar operator()(const Scalar& s) const;
  Polynomial derivative() const;
  Polynomial monic() const;

  /// Drops leading coefficients with magnitude <= threshold (float mode).
  Polynomial trimmed(double threshold) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return a.combine(b, Scalar(1)); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a.combine(b, Scalar(-1)); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) { return a.multiply(b); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; exact scalars only.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;

 private:
  Polynomial combine(const Polynomial& other, const Scalar& sign) const;
  Polynomial multiply(const Polynomial& other) const;
  void trim();
  std::vector<Scalar> c_;
};

using RationalPolynomial = Polynomial<Rational>;
using RealPolynomial = Polynomial<double>;

/// Monic greatest common divisor over the rationals.
RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

/// Yun's square-free decomposition: returns f_1, f_2, ... with
/// p = lead * f_1 * f_2^2 * f_3^3 ..., each f_i monic and square free.
std::vector<RationalPolynomial> square_free_decomposition(const RationalPolynomial& p);

/// Roots of a polynomial with real coefficients, via companion-matrix eigenvalues.
std::vector<Complex> numeric_roots(const RealPolynomial& p);

RealPolynomial to_double(const RationalPolynomial& p);

/// Rational roots of a square-free polynomial, each verified by exact evaluation.
/// Candidates come from continued-fraction convergents of the real numeric roots.
std::vector<Rational> rational_roots(const RationalPolynomial& square_free);

/// Interpolating polynomial through (nodes[i], values[i]) by Newton divided differences.
template <class Scalar>
Polynomial<Scalar> interpolate(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values);

/// Evaluates a polynomial at a square matrix argument (Horner).
template <class Scalar>
MatrixOf<Scalar> evaluate_at_matrix(const Polynomial<Scalar>& p, const MatrixOf<Scalar>& a);

}  // namespace descriptor
