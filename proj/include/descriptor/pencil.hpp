#pragma once

#include <optional>
#include <vector>

#include "descriptor/linalg.hpp"
#include "descriptor/polynomial.hpp"

namespace descriptor {

/// The pair (F, G) defining the pencil sF - G.
template <class Scalar>
struct BasicPencil {
  MatrixOf<Scalar> F;
  MatrixOf<Scalar> G;

  Index size() const { return F.rows(); }
  void validate() const;
};

using Pencil = BasicPencil<double>;
using ExactPencil = BasicPencil<Rational>;

ExactPencil to_exact(const Pencil& pencil);

enum class PencilClass { Regular, Singular };

const char* to_string(PencilClass c);

/// Coefficients of det(sF - G). Float mode interpolates determinants at m+1
/// integer nodes and drops leading coefficients below rank_tol * max |coeff|;
/// it returns the zero polynomial when classify_pencil reports Singular.
RealPolynomial det_polynomial(const Pencil& pencil, const Tolerance& tol = {});
RationalPolynomial det_polynomial(const ExactPencil& pencil);

/// Regular iff det(sF - G) is not identically zero. Float mode tests the rank
/// of sF - G at m+1 distinct sample points.
PencilClass classify_pencil(const Pencil& pencil, const Tolerance& tol = {});
PencilClass classify_pencil(const ExactPencil& pencil);

struct DecompositionOptions {
  Tolerance tol;
  double cluster_tol = 1e-6;  ///< finite eigenvalues closer than this (relative) merge
};

struct FiniteEigenvalue {
  Complex value;
  Index multiplicity = 0;
  std::optional<Rational> exact;  ///< set when the eigenvalue is rational and known exactly
};

struct SpectralStructure {
  std::vector<FiniteEigenvalue> finite;
  Index p = 0;
  Index q = 0;
};

SpectralStructure spectral_structure(const Pencil& pencil, const DecompositionOptions& opts = {});
SpectralStructure spectral_structure(const ExactPencil& pencil);

template <class Scalar>
struct JordanBlock {
  Scalar eigenvalue;
  Index size = 0;
};

/// P F Q = I_p (+) Hq and P G Q = Jp (+) I_q.
template <class Scalar>
struct BasicWeierstrassDecomposition {
  MatrixOf<Scalar> P;
  MatrixOf<Scalar> Q;
  MatrixOf<Scalar> Q_inv;
  MatrixOf<Scalar> Jp;
  MatrixOf<Scalar> Hq;
  Index p = 0;
  Index q = 0;
  int q_star = 0;  ///< nilpotency index of Hq, 0 when q == 0
  std::vector<JordanBlock<Scalar>> finite_blocks;
  std::vector<Index> infinite_blocks;
  Scalar shift{};  ///< c with det(cF - G) != 0 used to build the decomposition

  Index size() const { return p + q; }
  MatrixOf<Scalar> Qp() const { return Q.leftCols(p); }
  MatrixOf<Scalar> Qq() const { return Q.rightCols(q); }
};

using WeierstrassDecomposition = BasicWeierstrassDecomposition<Complex>;
using ExactWeierstrassDecomposition = BasicWeierstrassDecomposition<Rational>;

/// Float decomposition. Throws SingularPencil, or IllConditioned when the
/// eigenstructure cannot be resolved or the verification residual exceeds
/// residual_tol * max(1, |F|, |G|).
WeierstrassDecomposition weierstrass_decompose(const Pencil& pencil, const DecompositionOptions& opts = {});

/// Exact decomposition; requires every finite eigenvalue to be rational
/// (UnsupportedStructure otherwise).
ExactWeierstrassDecomposition weierstrass_decompose(const ExactPencil& pencil);

WeierstrassDecomposition to_complex(const ExactWeierstrassDecomposition& dec);

struct ElementaryDivisor {
  Complex value;                  ///< a_j of (s - a_j)^{p_j}
  std::optional<Rational> exact;  ///< exact a_j when rational
  Index degree = 0;               ///< p_j
};

struct ElementaryDivisorList {
  std::vector<ElementaryDivisor> finite;  ///< one per Jordan block
  std::vector<Index> infinite;            ///< q_j per nilpotent block, descending

  Index p() const;
  Index q() const;
  Index q_star() const;
};

ElementaryDivisorList elementary_divisors(const ExactPencil& pencil);

/// Always throws ExactModeRequired; use to_exact() first.
ElementaryDivisorList elementary_divisors(const Pencil& pencil);

struct DecompositionResiduals {
  double res_F = 0.0;
  double res_G = 0.0;
};

/// Max-abs norms of P F Q - (I_p (+) Hq) and P G Q - (Jp (+) I_q).
DecompositionResiduals verify_decomposition(const WeierstrassDecomposition& dec, const Pencil& pencil);
DecompositionResiduals verify_decomposition(const ExactWeierstrassDecomposition& dec, const ExactPencil& pencil);

/// Jordan block J(a) of the given size (a on the diagonal, ones above).
template <class Scalar>
MatrixOf<Scalar> jordan_block(const Scalar& eigenvalue, Index size);

/// Nilpotent shift block with ones on the superdiagonal.
template <class Scalar>
MatrixOf<Scalar> shift_block(Index size);

}  // namespace descriptor
