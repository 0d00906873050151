#include "descriptor/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <boost/integer/common_factor_rt.hpp>

namespace descriptor {

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::monomial(Index degree, Scalar coeff) {
  std::vector<Scalar> c(static_cast<size_t>(degree + 1), Scalar(0));
  c.back() = coeff;
  return Polynomial(std::move(c));
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::linear_factor(const Scalar& root) {
  return Polynomial(std::vector<Scalar>{-root, Scalar(1)});
}

template <class Scalar>
void Polynomial<Scalar>::trim() {
  while (!c_.empty() && c_.back() == Scalar(0)) c_.pop_back();
}

template <class Scalar>
Scalar Polynomial<Scalar>::operator()(const Scalar& s) const {
  Scalar acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Scalar> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Scalar(static_cast<long long>(k));
  return Polynomial(std::move(d));
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::monic() const {
  if (c_.empty()) return {};
  std::vector<Scalar> d = c_;
  const Scalar lead = c_.back();
  for (auto& x : d) x = x / lead;
  return Polynomial(std::move(d));
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::trimmed(double threshold) const {
  std::vector<Scalar> d = c_;
  while (!d.empty() && ScalarTraits<Scalar>::magnitude(d.back()) <= threshold) d.pop_back();
  return Polynomial(std::move(d));
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::combine(const Polynomial& other, const Scalar& sign) const {
  std::vector<Scalar> d(std::max(c_.size(), other.c_.size()), Scalar(0));
  for (size_t k = 0; k < c_.size(); ++k) d[k] = c_[k];
  for (size_t k = 0; k < other.c_.size(); ++k) d[k] += sign * other.c_[k];
  return Polynomial(std::move(d));
}

template <class Scalar>
Polynomial<Scalar> Polynomial<Scalar>::multiply(const Polynomial& b) const {
  if (is_zero() || b.is_zero()) return {};
  std::vector<Scalar> d(c_.size() + b.c_.size() - 1, Scalar(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) d[i + j] += c_[i] * b.c_[j];
  return Polynomial(std::move(d));
}

template <class Scalar>
std::pair<Polynomial<Scalar>, Polynomial<Scalar>> Polynomial<Scalar>::divmod(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  std::vector<Scalar> rem = c_;
  const Index dd = divisor.degree();
  if (degree() < dd) return {Polynomial{}, *this};
  std::vector<Scalar> quo(static_cast<size_t>(degree() - dd + 1), Scalar(0));
  for (Index k = degree(); k >= dd; --k) {
    const Scalar factor = rem[static_cast<size_t>(k)] / divisor.leading();
    quo[static_cast<size_t>(k - dd)] = factor;
    for (Index j = 0; j <= dd; ++j) rem[static_cast<size_t>(k - dd + j)] -= factor * divisor.c_[static_cast<size_t>(j)];
  }
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

template class Polynomial<double>;
template class Polynomial<Rational>;

RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<RationalPolynomial> square_free_decomposition(const RationalPolynomial& p) {
  std::vector<RationalPolynomial> out;
  if (p.degree() <= 0) return out;
  const RationalPolynomial f = p.monic();
  RationalPolynomial a = gcd(f, f.derivative());
  RationalPolynomial b = f.divmod(a).first;
  RationalPolynomial c = f.derivative().divmod(a).first;
  RationalPolynomial d = c - b.derivative();
  while (b.degree() > 0) {
    RationalPolynomial g = gcd(b, d);
    out.push_back(g);
    b = b.divmod(g).first;
    c = d.divmod(g).first;
    d = c - b.derivative();
  }
  // Trailing factors of degree 0 carry no roots.
  while (!out.empty() && out.back().degree() <= 0) out.pop_back();
  return out;
}

RealPolynomial to_double(const RationalPolynomial& p) {
  std::vector<double> c;
  c.reserve(p.coefficients().size());
  for (const auto& x : p.coefficients()) c.push_back(x.to_double());
  return RealPolynomial(std::move(c));
}

std::vector<Complex> numeric_roots(const RealPolynomial& p) {
  const Index n = p.degree();
  if (n <= 0) return {};
  Matrix companion = Matrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < n; ++i) companion(i, n - 1) = -p.coefficient(i) / p.leading();
  Eigen::EigenSolver<Matrix> solver(companion, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  return roots;
}

std::vector<Rational> rational_roots(const RationalPolynomial& square_free) {
  std::vector<Rational> found;
  if (square_free.degree() <= 0) return found;

  // Any rational root p/q in lowest terms has q dividing the leading
  // coefficient of the primitive integer multiple.
  Rational::Integer denom_lcm = 1;
  for (const auto& c : square_free.coefficients())
    denom_lcm = boost::integer::lcm(denom_lcm, c.denominator());
  Rational::Integer max_den = abs(square_free.leading().numerator() * (denom_lcm / square_free.leading().denominator()));

  auto try_candidate = [&](const Rational& r) {
    if (std::find(found.begin(), found.end(), r) != found.end()) return;
    if (square_free(r).is_zero()) found.push_back(r);
  };

  try_candidate(Rational(0));
  for (const Complex& z : numeric_roots(to_double(square_free))) {
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    // Continued-fraction convergents h/k of x.
    Rational::Integer h_prev = 0, h = 1, k_prev = 1, k = 0;
    double rest = x;
    for (int iter = 0; iter < 64; ++iter) {
      double a = std::floor(rest);
      if (!std::isfinite(a) || std::abs(a) > 1e18) break;
      Rational::Integer ai = static_cast<long long>(a);
      Rational::Integer h_next = ai * h + h_prev;
      Rational::Integer k_next = ai * k + k_prev;
      if (k_next > max_den) break;
      h_prev = h; h = h_next;
      k_prev = k; k = k_next;
      try_candidate(Rational(h, k));
      double frac = rest - a;
      if (frac < 1e-15) break;
      rest = 1.0 / frac;
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

template <class Scalar>
Polynomial<Scalar> interpolate(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values) {
  if (nodes.size() != values.size()) throw Error(ErrorCode::DimensionMismatch, "interpolation nodes/values differ");
  const size_t n = nodes.size();
  std::vector<Scalar> dd = values;
  for (size_t level = 1; level < n; ++level)
    for (size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
      if (i == level) break;
    }
  // Newton form to monomial form, nested from the highest divided difference.
  Polynomial<Scalar> result;
  for (size_t i = n; i-- > 0;) {
    result = result * Polynomial<Scalar>::linear_factor(nodes[i]) + Polynomial<Scalar>(std::vector<Scalar>{dd[i]});
  }
  return result;
}

template <class Scalar>
MatrixOf<Scalar> evaluate_at_matrix(const Polynomial<Scalar>& p, const MatrixOf<Scalar>& a) {
  require_square(a.rows(), a.cols(), "matrix argument");
  const Index n = a.rows();
  MatrixOf<Scalar> acc = MatrixOf<Scalar>::Zero(n, n);
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = (acc * a).eval();
    for (Index i = 0; i < n; ++i) acc(i, i) += *it;
  }
  return acc;
}

template Polynomial<double> interpolate(const std::vector<double>&, const std::vector<double>&);
template Polynomial<Rational> interpolate(const std::vector<Rational>&, const std::vector<Rational>&);
template MatrixOf<double> evaluate_at_matrix(const Polynomial<double>&, const MatrixOf<double>&);
template MatrixOf<Rational> evaluate_at_matrix(const Polynomial<Rational>&, const MatrixOf<Rational>&);

}  // namespace descriptor
