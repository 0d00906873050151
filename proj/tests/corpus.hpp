// Hand-built pencils with structure known by construction.
//
// Most entries are P0 * (canonical pencil) * Q0 for unimodular integer P0, Q0,
// so eigenvalues, Jordan block sizes and nilpotent block sizes are fixed
// before any library code runs.
#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "descriptor/linalg.hpp"
#include "descriptor/rational.hpp"

namespace corpus {

using descriptor::Index;
using descriptor::Rational;
using descriptor::RationalMatrix;
using Complex = std::complex<double>;

struct Divisor {
  Complex value;
  Index degree;
};

struct Entry {
  std::string name;
  RationalMatrix F, G;
  bool regular = true;
  std::vector<Divisor> finite;   // one per Jordan block, sorted by (re, im) then size descending
  std::vector<Index> infinite;   // nilpotent block sizes, descending
  bool rational_spectrum = true; // exact decomposition possible
  Index p() const {
    Index s = 0;
    for (const auto& d : finite) s += d.degree;
    return s;
  }
  Index q() const {
    Index s = 0;
    for (auto b : infinite) s += b;
    return s;
  }
  int q_star() const { return infinite.empty() ? 0 : static_cast<int>(infinite.front()); }
};

inline RationalMatrix mat(Index r, Index c, std::initializer_list<Rational> values) {
  RationalMatrix m(r, c);
  auto it = values.begin();
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

/// Unit lower times unit upper triangular with small integer entries; det = 1.
inline RationalMatrix unimodular(Index m, int seed) {
  RationalMatrix L = RationalMatrix::Identity(m, m), U = RationalMatrix::Identity(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const int v = static_cast<int>((i * 3 + j * 5 + seed * 7) % 5) - 2;
      if (i > j) L(i, j) = Rational(v);
      if (i < j) U(i, j) = Rational((v + seed) % 3);
    }
  return L * U;
}

inline RationalMatrix block_diag(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix out = RationalMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

inline RationalMatrix jordan(Rational lambda, Index n) {
  RationalMatrix j = RationalMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    j(i, i) = lambda;
    if (i + 1 < n) j(i, i + 1) = Rational(1);
  }
  return j;
}

inline RationalMatrix shift(Index n) { return jordan(Rational(0), n); }

inline RationalMatrix eye(Index n) { return RationalMatrix::Identity(n, n); }

/// (P0 Fc Q0, P0 Gc Q0)
inline Entry transformed(std::string name, const RationalMatrix& fc, const RationalMatrix& gc, int seed,
                         std::vector<Divisor> finite, std::vector<Index> infinite) {
  const Index m = fc.rows();
  const RationalMatrix p0 = unimodular(m, seed), q0 = unimodular(m, seed + 1).transpose();
  return Entry{std::move(name), p0 * fc * q0, p0 * gc * q0, true, std::move(finite), std::move(infinite), true};
}

inline std::vector<Entry> pencils() {
  std::vector<Entry> c;
  const double r2 = std::sqrt(2.0);

  c.push_back({"mixed_2x2", mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {-1, 0, 0, 1}), true, {{-1.0, 1}}, {1}, true});
  c.push_back({"nilpotent_2x2", mat(2, 2, {0, 1, 0, 0}), eye(2), true, {}, {2}, true});
  c.push_back({"diag_ode", eye(2), mat(2, 2, {1, 0, 0, 2}), true, {{1.0, 1}, {2.0, 1}}, {}, true});
  c.push_back({"jordan_2", eye(2), mat(2, 2, {1, 1, 0, 1}), true, {{1.0, 2}}, {}, true});
  c.push_back({"scalar_fast", mat(1, 1, {0}), mat(1, 1, {1}), true, {}, {1}, true});
  c.push_back(transformed("index3_nilpotent", shift(3), eye(3), 1, {}, {3}));
  c.push_back({"complex_pair", eye(2), mat(2, 2, {0, 1, -1, 0}), true, {{Complex(0, -1), 1}, {Complex(0, 1), 1}}, {},
               false});
  c.push_back({"mixed_index2", mat(3, 3, {1, 1, 1, 0, 1, 1, 0, 1, 1}), mat(3, 3, {-1, 1, 0, 1, 1, 0, 1, 2, 1}), true,
               {{-2.0, 1}}, {2}, true});
  c.push_back(transformed("mixed_6x6",
                          block_diag(eye(3), block_diag(shift(2), mat(1, 1, {0}))),
                          block_diag(block_diag(mat(1, 1, {Rational(-1, 2)}), jordan(3, 2)), eye(3)), 2,
                          {{-0.5, 1}, {3.0, 2}}, {2, 1}));
  c.push_back({"zero_F", RationalMatrix::Zero(2, 2), eye(2), true, {}, {1, 1}, true});
  c.push_back({"semisimple_repeated", eye(2), mat(2, 2, {2, 0, 0, 2}), true, {{2.0, 1}, {2.0, 1}}, {}, true});
  c.push_back({"fractional_eigs", mat(2, 2, {2, 0, 0, 3}), eye(2), true, {{1.0 / 3.0, 1}, {0.5, 1}}, {}, true});
  c.push_back(transformed("zero_eigenvalue", block_diag(eye(2), mat(1, 1, {0})),
                          block_diag(jordan(0, 2), eye(1)), 3, {{0.0, 2}}, {1}));
  c.push_back({"irrational_pair", eye(2), mat(2, 2, {0, 1, 2, 0}), true, {{-r2, 1}, {r2, 1}}, {}, false});
  c.push_back({"singular_diag", mat(2, 2, {1, 0, 0, 0}), mat(2, 2, {1, 0, 0, 0}), false, {}, {}, true});
  c.push_back({"singular_3x3", mat(3, 3, {1, 0, 0, 0, 0, 0, 0, 0, 0}), mat(3, 3, {0, 0, 0, 1, 0, 0, 0, 1, 0}), false,
               {}, {}, true});
  return c;
}

}  // namespace corpus
