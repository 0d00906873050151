#include "descriptor/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

namespace descriptor {

template <class Scalar>
void BasicPencil<Scalar>::validate() const {
  require_square(F.rows(), F.cols(), "F");
  require_square(G.rows(), G.cols(), "G");
  if (F.rows() != G.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "F is " + std::to_string(F.rows()) + "x" + std::to_string(F.cols()) + " but G is " +
                    std::to_string(G.rows()) + "x" + std::to_string(G.cols()));
  if (F.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "pencil must have positive dimension");
}

template struct BasicPencil<double>;
template struct BasicPencil<Rational>;

ExactPencil to_exact(const Pencil& pencil) { return {to_exact(pencil.F), to_exact(pencil.G)}; }

const char* to_string(PencilClass c) { return c == PencilClass::Regular ? "regular" : "singular"; }

template <class Scalar>
MatrixOf<Scalar> jordan_block(const Scalar& eigenvalue, Index size) {
  MatrixOf<Scalar> out = MatrixOf<Scalar>::Zero(size, size);
  for (Index i = 0; i < size; ++i) {
    out(i, i) = eigenvalue;
    if (i + 1 < size) out(i, i + 1) = Scalar(1);
  }
  return out;
}

template <class Scalar>
MatrixOf<Scalar> shift_block(Index size) {
  MatrixOf<Scalar> out = MatrixOf<Scalar>::Zero(size, size);
  for (Index i = 0; i + 1 < size; ++i) out(i, i + 1) = Scalar(1);
  return out;
}

template MatrixOf<double> jordan_block(const double&, Index);
template MatrixOf<Complex> jordan_block(const Complex&, Index);
template MatrixOf<Rational> jordan_block(const Rational&, Index);
template MatrixOf<double> shift_block<double>(Index);
template MatrixOf<Complex> shift_block<Complex>(Index);
template MatrixOf<Rational> shift_block<Rational>(Index);

namespace {

// Deterministic, non-integer sample points for the float regularity test.
double regularity_sample(Index i) { return 0.5 + 0.7390851332151607 * static_cast<double>(i); }

bool lambda_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// ---------------------------------------------------------------------------
// Jordan chains of an operator N restricted to the kernel of N^multiplicity.

template <class Scalar>
double power_scale(const MatrixOf<Scalar>& n, const MatrixOf<Scalar>& power, Index k) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return -1.0;
  } else {
    return std::max(max_abs<Scalar>(power), std::pow(max_abs<Scalar>(n), static_cast<double>(k)));
  }
}

/// Nullities of N^k for k = 0, 1, ... until they reach `target`.
template <class Scalar>
std::vector<MatrixOf<Scalar>> nested_kernels(const MatrixOf<Scalar>& n, Index target, const Tolerance& tol) {
  const Index m = n.rows();
  std::vector<MatrixOf<Scalar>> kernels{MatrixOf<Scalar>(m, 0)};
  MatrixOf<Scalar> power = MatrixOf<Scalar>::Identity(m, m);
  while (kernels.back().cols() < target) {
    const Index k = static_cast<Index>(kernels.size());
    power = (power * n).eval();
    MatrixOf<Scalar> basis = rank_and_nullspace<Scalar>(power, tol, power_scale<Scalar>(n, power, k)).null_basis;
    if (basis.cols() > target || basis.cols() <= kernels.back().cols())
      throw Error(ErrorCode::IllConditioned, "generalized eigenspace of dimension " + std::to_string(target) +
                                                 " not resolved (kernel dimension " + std::to_string(basis.cols()) +
                                                 " at power " + std::to_string(k) + ")");
    kernels.push_back(std::move(basis));
  }
  return kernels;
}

/// Columns [N^{L-1} v, ..., N v, v] for each chain head v of length L,
/// longest chains first.
template <class Scalar>
std::vector<MatrixOf<Scalar>> jordan_chains(const MatrixOf<Scalar>& n, Index multiplicity, const Tolerance& tol) {
  const Index m = n.rows();
  auto kernels = nested_kernels<Scalar>(n, multiplicity, tol);
  const Index depth = static_cast<Index>(kernels.size()) - 1;

  struct Head {
    VectorOf<Scalar> v;
    Index length;
  };
  std::vector<Head> heads;
  for (Index level = depth; level >= 1; --level) {
    std::vector<VectorOf<Scalar>> cols;
    const auto& lower = kernels[static_cast<size_t>(level - 1)];
    for (Index j = 0; j < lower.cols(); ++j) cols.push_back(lower.col(j));
    for (const auto& h : heads) {
      VectorOf<Scalar> w = h.v;
      for (Index s = 0; s < h.length - level; ++s) w = n * w;
      cols.push_back(w);
    }
    auto stack = [&](const std::vector<VectorOf<Scalar>>& vs) {
      MatrixOf<Scalar> out(m, static_cast<Index>(vs.size()));
      for (size_t j = 0; j < vs.size(); ++j) out.col(static_cast<Index>(j)) = vs[j];
      return out;
    };
    Index rank = cols.empty() ? 0 : rank_and_nullspace<Scalar>(stack(cols), tol).rank;
    const auto& upper = kernels[static_cast<size_t>(level)];
    for (Index j = 0; j < upper.cols(); ++j) {
      cols.push_back(upper.col(j));
      Index r = rank_and_nullspace<Scalar>(stack(cols), tol).rank;
      if (r > rank) {
        heads.push_back({upper.col(j), level});
        rank = r;
      } else {
        cols.pop_back();
      }
    }
  }

  std::vector<MatrixOf<Scalar>> chains;
  Index total = 0;
  for (const auto& h : heads) {
    MatrixOf<Scalar> x(m, h.length);
    x.col(h.length - 1) = h.v;
    for (Index i = h.length - 1; i > 0; --i) x.col(i - 1) = n * x.col(i);
    chains.push_back(std::move(x));
    total += h.length;
  }
  if (total != multiplicity)
    throw Error(ErrorCode::IllConditioned, "Jordan chains cover " + std::to_string(total) + " of " +
                                               std::to_string(multiplicity) + " generalized eigenvectors");
  return chains;
}

/// R = [M^{L-1} e_L, ..., M e_L, e_L] so that M R = R * shift when M is
/// nilpotent with a nonvanishing superdiagonal.
template <class Scalar>
MatrixOf<Scalar> chain_basis(const MatrixOf<Scalar>& m) {
  const Index size = m.rows();
  MatrixOf<Scalar> r = MatrixOf<Scalar>::Zero(size, size);
  r(size - 1, size - 1) = Scalar(1);
  for (Index i = size - 1; i > 0; --i) r.col(i - 1) = m * r.col(i);
  return r;
}

template <class Scalar>
struct Cluster {
  Scalar lambda;
  Index multiplicity;
};

template <class Scalar>
BasicWeierstrassDecomposition<Scalar> assemble(const MatrixOf<Scalar>& f, const MatrixOf<Scalar>& g,
                                               const Scalar& c, const MatrixOf<Scalar>& t,
                                               const std::vector<Cluster<Scalar>>& clusters, Index q,
                                               const Tolerance& tol) {
  using Mat = MatrixOf<Scalar>;
  const Index m = f.rows();
  BasicWeierstrassDecomposition<Scalar> dec;
  dec.shift = c;
  std::vector<Mat> blocks;

  // Finite eigenvalue lambda of the pencil is mu = 1 / (c - lambda) for T.
  // On a chain, T X = X (mu I + S) gives G X = F X (c I - (mu I + S)^{-1}),
  // which is re-based onto a canonical Jordan block.
  for (const auto& cl : clusters) {
    const Scalar mu = Scalar(1) / (c - cl.lambda);
    const Mat n = t - mu * Mat::Identity(m, m);
    for (const Mat& x : jordan_chains<Scalar>(n, cl.multiplicity, tol)) {
      const Index len = x.cols();
      const Mat s = mu * Mat::Identity(len, len) + shift_block<Scalar>(len);
      const Mat jprime = c * Mat::Identity(len, len) - inverse<Scalar>(s, tol);
      const Mat nprime = jprime - cl.lambda * Mat::Identity(len, len);
      blocks.push_back(x * chain_basis<Scalar>(nprime));
      dec.finite_blocks.push_back({cl.lambda, len});
    }
  }
  // Infinite part: T X = X S with S nilpotent gives F X = G X H' where
  // H' = -S (I - c S)^{-1}.
  if (q > 0) {
    for (const Mat& x : jordan_chains<Scalar>(t, q, tol)) {
      const Index len = x.cols();
      const Mat s = shift_block<Scalar>(len);
      const Mat hprime = -(s * inverse<Scalar>(Mat::Identity(len, len) - c * s, tol));
      blocks.push_back(x * chain_basis<Scalar>(hprime));
      dec.infinite_blocks.push_back(len);
    }
  }

  dec.p = m - q;
  dec.q = q;
  dec.Q = Mat(m, m);
  Index col = 0;
  for (auto& b : blocks) {
    if constexpr (!ScalarTraits<Scalar>::exact) {
      const double scale = max_abs<Scalar>(b);
      if (scale > 0.0) b /= Scalar(scale);
    }
    dec.Q.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  if (col != m) throw Error(ErrorCode::IllConditioned, "eigenvector basis is incomplete");

  Mat stacked(m, m);
  stacked << f * dec.Q.leftCols(dec.p), g * dec.Q.rightCols(q);
  try {
    dec.P = inverse<Scalar>(stacked, tol);
    dec.Q_inv = inverse<Scalar>(dec.Q, tol);
  } catch (const Error&) {
    throw Error(ErrorCode::IllConditioned, "deflating subspaces are numerically dependent");
  }

  dec.Jp = Mat::Zero(dec.p, dec.p);
  Index at = 0;
  for (const auto& b : dec.finite_blocks) {
    dec.Jp.block(at, at, b.size, b.size) = jordan_block<Scalar>(b.eigenvalue, b.size);
    at += b.size;
  }
  dec.Hq = Mat::Zero(q, q);
  at = 0;
  for (Index len : dec.infinite_blocks) {
    dec.Hq.block(at, at, len, len) = shift_block<Scalar>(len);
    at += len;
    dec.q_star = std::max(dec.q_star, static_cast<int>(len));
  }
  return dec;
}

// ---------------------------------------------------------------------------
// Float spectrum: shift, T = (cF - G)^{-1} F, number of infinite eigenvalues,
// and clustered finite eigenvalues.

struct FloatSpectrum {
  double shift = 0.0;
  CMatrix t;
  Index q = 0;
  std::vector<Cluster<Complex>> clusters;
};

FloatSpectrum float_spectrum(const Pencil& pencil, const DecompositionOptions& opts) {
  pencil.validate();
  opts.tol.validate();
  if (classify_pencil(pencil, opts.tol) == PencilClass::Singular)
    throw Error(ErrorCode::SingularPencil, "det(sF - G) vanishes identically");
  const Index m = pencil.size();

  FloatSpectrum out;
  double best_rcond = -1.0;
  Matrix best_t;
  for (Index i = 0; i <= 2 * m + 2; ++i) {
    const double c = (i % 2 == 0 ? -1.0 : 1.0) * static_cast<double>((i + 1) / 2);
    // LU's rcond estimate reports 1 for an exactly zero pivot; singular values do not.
    const Matrix shifted = c * pencil.F - pencil.G;
    const Eigen::JacobiSVD<Matrix> svd(shifted);
    const auto& sv = svd.singularValues();
    const double rc = sv(0) > 0.0 ? sv(m - 1) / sv(0) : 0.0;
    if (rc > best_rcond + 1e-12) {
      best_rcond = rc;
      out.shift = c;
      best_t = Eigen::PartialPivLU<Matrix>(shifted).solve(pencil.F);
    }
  }
  if (!(best_rcond > opts.tol.rank_tol))
    throw Error(ErrorCode::SingularPencil, "no shift c with cF - G invertible");
  out.t = best_t.cast<Complex>();

  // rank(T^m) is unreliable once |T|^m dwarfs the smallest finite mu^m; the
  // determinant degree is not.
  out.q = m - det_polynomial(pencil, opts.tol).degree();

  Eigen::ComplexEigenSolver<CMatrix> solver(out.t, false);
  std::vector<Complex> mus(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::stable_sort(mus.begin(), mus.end(), [](const Complex& a, const Complex& b) { return std::abs(a) < std::abs(b); });
  mus.erase(mus.begin(), mus.begin() + out.q);

  const double c = out.shift;
  std::vector<Complex> lambdas;
  for (const auto& mu : mus) lambdas.push_back(c - 1.0 / mu);

  // Single-linkage clustering in the pencil's eigenvalue plane.
  const size_t count = lambdas.size();
  std::vector<size_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < count; ++i)
    for (size_t j = i + 1; j < count; ++j) {
      const double reach = opts.cluster_tol * std::max({1.0, std::abs(lambdas[i]), std::abs(lambdas[j])});
      if (std::abs(lambdas[i] - lambdas[j]) <= reach) parent[find(i)] = find(j);
    }
  std::vector<std::pair<size_t, std::vector<size_t>>> groups;
  for (size_t i = 0; i < count; ++i) {
    size_t root = find(i);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == root; });
    if (it == groups.end()) groups.push_back({root, {i}});
    else it->second.push_back(i);
  }
  for (const auto& [root, members] : groups) {
    Complex mean_mu = 0.0;
    for (size_t i : members) mean_mu += mus[i];
    mean_mu /= static_cast<double>(members.size());
    Complex lambda = c - 1.0 / mean_mu;
    if (std::abs(lambda.imag()) <= opts.cluster_tol * std::max(1.0, std::abs(lambda))) lambda.imag(0.0);
    out.clusters.push_back({lambda, static_cast<Index>(members.size())});
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return lambda_less(a.lambda, b.lambda); });
  return out;
}

// ---------------------------------------------------------------------------
// Exact spectrum from the determinant polynomial.

struct ExactSpectrum {
  RationalPolynomial det;
  Index p = 0;
  Index q = 0;
  std::vector<Cluster<Rational>> rational;
  std::vector<std::pair<RationalPolynomial, Index>> irrational;  // square-free factor, multiplicity
};

ExactSpectrum exact_spectrum(const ExactPencil& pencil) {
  pencil.validate();
  ExactSpectrum out;
  out.det = det_polynomial(pencil);
  if (out.det.is_zero()) throw Error(ErrorCode::SingularPencil, "det(sF - G) vanishes identically");
  out.p = out.det.degree();
  out.q = pencil.size() - out.p;
  const auto factors = square_free_decomposition(out.det);
  for (size_t i = 0; i < factors.size(); ++i) {
    const Index mult = static_cast<Index>(i + 1);
    RationalPolynomial rest = factors[i];
    for (const Rational& r : rational_roots(factors[i])) {
      out.rational.push_back({r, mult});
      rest = rest.divmod(RationalPolynomial::linear_factor(r)).first;
    }
    if (rest.degree() > 0) out.irrational.push_back({rest, mult});
  }
  std::sort(out.rational.begin(), out.rational.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

Rational exact_shift(const ExactPencil& pencil, const RationalPolynomial& det) {
  const Index m = pencil.size();
  for (Index i = 0; i <= 2 * m + 2; ++i) {
    const long long c = (i % 2 == 0 ? -1 : 1) * static_cast<long long>((i + 1) / 2);
    if (!det(Rational(c)).is_zero()) return Rational(c);
  }
  throw Error(ErrorCode::SingularPencil, "no integer shift with det(cF - G) != 0");
}

/// Block sizes from the nullities n_k = dim ker N^k (n_0 = 0), descending.
std::vector<Index> partition_from_nullities(const std::vector<Index>& nullity) {
  std::vector<Index> sizes;
  const auto depth = static_cast<Index>(nullity.size()) - 1;
  auto at = [&](Index k) { return nullity[static_cast<size_t>(k)]; };
  for (Index k = depth; k >= 1; --k) {
    const Index at_least_k = at(k) - at(k - 1);
    const Index at_least_next = k + 1 <= depth ? at(k + 1) - at(k) : 0;
    for (Index b = 0; b < at_least_k - at_least_next; ++b) sizes.push_back(k);
  }
  return sizes;
}

std::vector<Index> exact_nullities(const RationalMatrix& n, Index target) {
  std::vector<Index> nullity{0};
  RationalMatrix power = RationalMatrix::Identity(n.rows(), n.cols());
  while (nullity.back() < target) {
    power = (power * n).eval();
    const Index k = n.cols() - rank_and_nullspace<Rational>(power).rank;
    if (k <= nullity.back())
      throw Error(ErrorCode::UnsupportedStructure, "kernel dimensions stalled below the algebraic multiplicity");
    nullity.push_back(k);
  }
  return nullity;
}

}  // namespace

// ---------------------------------------------------------------------------

RealPolynomial det_polynomial(const Pencil& pencil, const Tolerance& tol) {
  pencil.validate();
  if (classify_pencil(pencil, tol) == PencilClass::Singular) return {};
  const Index m = pencil.size();
  std::vector<double> nodes, values;
  for (Index i = 0; i <= m; ++i) {
    const double s = static_cast<double>(i - m / 2);
    nodes.push_back(s);
    values.push_back(determinant<double>(s * pencil.F - pencil.G));
  }
  RealPolynomial raw = interpolate(nodes, values);
  double biggest = 0.0;
  for (double c : raw.coefficients()) biggest = std::max(biggest, std::abs(c));
  return raw.trimmed(tol.rank_tol * biggest);
}

RationalPolynomial det_polynomial(const ExactPencil& pencil) {
  pencil.validate();
  const Index m = pencil.size();
  std::vector<Rational> nodes, values;
  for (Index i = 0; i <= m; ++i) {
    const Rational s(static_cast<long long>(i - m / 2));
    nodes.push_back(s);
    values.push_back(determinant<Rational>((s * pencil.F - pencil.G).eval()));
  }
  return interpolate(nodes, values);
}

PencilClass classify_pencil(const Pencil& pencil, const Tolerance& tol) {
  pencil.validate();
  const Index m = pencil.size();
  for (Index i = 0; i <= m; ++i) {
    const Matrix a = regularity_sample(i) * pencil.F - pencil.G;
    if (rank_and_nullspace<double>(a, tol).rank == m) return PencilClass::Regular;
  }
  return PencilClass::Singular;
}

PencilClass classify_pencil(const ExactPencil& pencil) {
  return det_polynomial(pencil).is_zero() ? PencilClass::Singular : PencilClass::Regular;
}

SpectralStructure spectral_structure(const Pencil& pencil, const DecompositionOptions& opts) {
  const FloatSpectrum spec = float_spectrum(pencil, opts);
  SpectralStructure out;
  out.q = spec.q;
  out.p = pencil.size() - spec.q;
  for (const auto& cl : spec.clusters) out.finite.push_back({cl.lambda, cl.multiplicity, std::nullopt});
  return out;
}

SpectralStructure spectral_structure(const ExactPencil& pencil) {
  const ExactSpectrum spec = exact_spectrum(pencil);
  SpectralStructure out;
  out.p = spec.p;
  out.q = spec.q;
  for (const auto& cl : spec.rational) out.finite.push_back({Complex(cl.lambda.to_double(), 0.0), cl.multiplicity, cl.lambda});
  for (const auto& [factor, mult] : spec.irrational)
    for (const Complex& z : numeric_roots(to_double(factor))) out.finite.push_back({z, mult, std::nullopt});
  std::stable_sort(out.finite.begin(), out.finite.end(),
                   [](const auto& a, const auto& b) { return lambda_less(a.value, b.value); });
  return out;
}

WeierstrassDecomposition weierstrass_decompose(const Pencil& pencil, const DecompositionOptions& opts) {
  const FloatSpectrum spec = float_spectrum(pencil, opts);
  const CMatrix f = to_complex(pencil.F);
  const CMatrix g = to_complex(pencil.G);
  WeierstrassDecomposition dec =
      assemble<Complex>(f, g, Complex(spec.shift, 0.0), spec.t, spec.clusters, spec.q, opts.tol);
  const auto res = verify_decomposition(dec, pencil);
  const double bound = opts.tol.residual_tol * std::max({1.0, max_abs<double>(pencil.F), max_abs<double>(pencil.G)});
  if (res.res_F > bound || res.res_G > bound)
    throw Error(ErrorCode::IllConditioned, "decomposition residuals " + std::to_string(res.res_F) + ", " +
                                               std::to_string(res.res_G) + " exceed " + std::to_string(bound));
  return dec;
}

ExactWeierstrassDecomposition weierstrass_decompose(const ExactPencil& pencil) {
  const ExactSpectrum spec = exact_spectrum(pencil);
  if (!spec.irrational.empty())
    throw Error(ErrorCode::UnsupportedStructure, "exact decomposition needs rational finite eigenvalues");
  const Rational c = exact_shift(pencil, spec.det);
  const RationalMatrix t = solve_linear<Rational>((c * pencil.F - pencil.G).eval(), pencil.F);
  return assemble<Rational>(pencil.F, pencil.G, c, t, spec.rational, spec.q, Tolerance{});
}

WeierstrassDecomposition to_complex(const ExactWeierstrassDecomposition& dec) {
  WeierstrassDecomposition out;
  out.P = to_complex(dec.P);
  out.Q = to_complex(dec.Q);
  out.Q_inv = to_complex(dec.Q_inv);
  out.Jp = to_complex(dec.Jp);
  out.Hq = to_complex(dec.Hq);
  out.p = dec.p;
  out.q = dec.q;
  out.q_star = dec.q_star;
  for (const auto& b : dec.finite_blocks) out.finite_blocks.push_back({Complex(b.eigenvalue.to_double(), 0.0), b.size});
  out.infinite_blocks = dec.infinite_blocks;
  out.shift = Complex(dec.shift.to_double(), 0.0);
  return out;
}

Index ElementaryDivisorList::p() const {
  Index total = 0;
  for (const auto& d : finite) total += d.degree;
  return total;
}

Index ElementaryDivisorList::q() const { return std::accumulate(infinite.begin(), infinite.end(), Index{0}); }

Index ElementaryDivisorList::q_star() const {
  return infinite.empty() ? 0 : *std::max_element(infinite.begin(), infinite.end());
}

ElementaryDivisorList elementary_divisors(const ExactPencil& pencil) {
  const ExactSpectrum spec = exact_spectrum(pencil);
  const Rational c = exact_shift(pencil, spec.det);
  const RationalMatrix t = solve_linear<Rational>((c * pencil.F - pencil.G).eval(), pencil.F);
  const Index m = pencil.size();
  const RationalMatrix ident = RationalMatrix::Identity(m, m);

  ElementaryDivisorList out;
  for (const auto& cl : spec.rational) {
    const Rational mu = Rational(1) / (c - cl.lambda);
    const RationalMatrix n = t - mu * ident;
    for (Index size : partition_from_nullities(exact_nullities(n, cl.multiplicity)))
      out.finite.push_back({Complex(cl.lambda.to_double(), 0.0), cl.lambda, size});
  }
  for (const auto& [factor, mult] : spec.irrational) {
    // g(c - 1/mu) mu^d as a polynomial in mu, evaluated at T.
    const Index d = factor.degree();
    RationalPolynomial mapped;
    const RationalPolynomial c_mu_minus_1(std::vector<Rational>{Rational(-1), c});
    for (Index j = 0; j <= d; ++j) {
      RationalPolynomial term(std::vector<Rational>{factor.coefficient(j)});
      for (Index k = 0; k < j; ++k) term = term * c_mu_minus_1;
      term = term * RationalPolynomial::monomial(d - j);
      mapped = mapped + term;
    }
    const auto nullity = exact_nullities(evaluate_at_matrix(mapped, t), mult * d);
    std::vector<Index> per_root{0};
    for (size_t k = 1; k < nullity.size(); ++k) {
      if (nullity[k] % d != 0)
        throw Error(ErrorCode::UnsupportedStructure,
                    "conjugate irrational eigenvalues carry different Jordan structures");
      per_root.push_back(nullity[k] / d);
    }
    const auto sizes = partition_from_nullities(per_root);
    for (const Complex& z : numeric_roots(to_double(factor)))
      for (Index size : sizes) out.finite.push_back({z, std::nullopt, size});
  }
  std::stable_sort(out.finite.begin(), out.finite.end(), [](const auto& a, const auto& b) {
    if (a.value != b.value) return lambda_less(a.value, b.value);
    return a.degree > b.degree;
  });
  if (spec.q > 0) out.infinite = partition_from_nullities(exact_nullities(t, spec.q));
  return out;
}

ElementaryDivisorList elementary_divisors(const Pencil&) {
  throw Error(ErrorCode::ExactModeRequired, "elementary divisors are computed in exact rational mode");
}

namespace {

template <class Scalar>
std::pair<MatrixOf<Scalar>, MatrixOf<Scalar>> canonical_pair(const BasicWeierstrassDecomposition<Scalar>& dec) {
  using Mat = MatrixOf<Scalar>;
  return {direct_sum<Scalar>(Mat::Identity(dec.p, dec.p), dec.Hq), direct_sum<Scalar>(dec.Jp, Mat::Identity(dec.q, dec.q))};
}

void check_dims(Index dec_size, Index p_rows, Index q_rows, Index pencil_size) {
  if (dec_size != pencil_size || p_rows != pencil_size || q_rows != pencil_size)
    throw Error(ErrorCode::DimensionMismatch, "decomposition and pencil dimensions differ");
}

}  // namespace

DecompositionResiduals verify_decomposition(const WeierstrassDecomposition& dec, const Pencil& pencil) {
  pencil.validate();
  check_dims(dec.size(), dec.P.rows(), dec.Q.rows(), pencil.size());
  const auto [fw, gw] = canonical_pair(dec);
  const CMatrix rf = dec.P * to_complex(pencil.F) * dec.Q - fw;
  const CMatrix rg = dec.P * to_complex(pencil.G) * dec.Q - gw;
  return {max_abs<Complex>(rf), max_abs<Complex>(rg)};
}

DecompositionResiduals verify_decomposition(const ExactWeierstrassDecomposition& dec, const ExactPencil& pencil) {
  pencil.validate();
  check_dims(dec.size(), dec.P.rows(), dec.Q.rows(), pencil.size());
  const auto [fw, gw] = canonical_pair(dec);
  const RationalMatrix rf = dec.P * pencil.F * dec.Q - fw;
  const RationalMatrix rg = dec.P * pencil.G * dec.Q - gw;
  return {max_abs<Rational>(rf), max_abs<Rational>(rg)};
}

}  // namespace descriptor
