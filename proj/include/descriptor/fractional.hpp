#pragma once

#include <string>
#include <vector>

#include "descriptor/discretizer.hpp"

namespace descriptor {

/// Order n of the nabla difference, restricted to 0 < n < 1 or 1 < n < 2.
class FractionalOrder {
 public:
  explicit FractionalOrder(double n);
  double value() const { return n_; }

  static bool admissible(double n) { return (n > 0.0 && n < 1.0) || (n > 1.0 && n < 2.0); }

 private:
  double n_;
};

/// Gamma(k + a) / Gamma(k), with removable poles resolved as limits.
/// Throws GammaPole when the ratio is infinite.
double rising_factorial(double k, double a);

/// c_j = (j+1)^{rising(-n-1)} / Gamma(-n), so that nabla^n Y_k = sum_j c_{k-j} Y_j.
struct NablaCoefficients {
  FractionalOrder n;
  std::vector<double> c;
};

/// c_0 .. c_K via c_{j+1} = c_j (j - n) / (j + 1).
NablaCoefficients nabla_coefficients(FractionalOrder n, long K);

/// Single coefficient evaluated from Gamma functions (no recurrence).
double nabla_coefficient_direct(FractionalOrder n, long j);

/// sum_{j=0}^{k} c_{k-j} Y_j
Vector nabla_apply(const SampleSequence& seq, FractionalOrder n, long k);

/// F nabla^n Y_k = G Y_k + V_k
struct FractionalSystem {
  Matrix F;
  Matrix G;
  FractionalOrder n{0.5};
  bool step_matrix_invertible = false;  ///< F - G nonsingular
};

/// Validates dimensions and regularity of (F, G) and records whether F - G is invertible.
FractionalSystem make_fractional_system(const Matrix& F, const Matrix& G, FractionalOrder n,
                                        const Tolerance& tol = {});

/// Y_0 .. Y_K with (F - G) Y_k = V_k - F sum_{j<k} c_{k-j} Y_j for k >= 1.
SampleSequence solve_fractional_system(const FractionalSystem& fsys, const SampleSequence& inputs, const Vector& y0,
                                       long K);

/// Y_k = Y_0 + sum_{j<k} ((A - I) Y_j + U_j), evaluated as a full sum for each k.
SampleSequence telescope_recursion(const Matrix& A, const SampleSequence& U, const Vector& y0, long K);

struct LagMismatch {
  long lag = 0;
  double coefficient = 0.0;  ///< c_{d-1} = d^{rising(-n-1)} / Gamma(-n)
  double delta = 0.0;        ///< |(A - I) - c_{d-1} F|_inf
};

struct CorrespondenceReport {
  double n = 0.0;
  std::vector<LagMismatch> lags;
  double max_delta = 0.0;
  double best_fit_n = 0.0;
  double best_fit_total = 0.0;   ///< sum_d delta_d at best_fit_n
  bool corresponds = false;      ///< every delta_d <= approx_tol
  std::string verdict;           ///< "exact", "approximate" or "fails"
  SampleSequence aggregate_input;  ///< W_k = U_0 + ... + U_{k-1}, k = 0..K
};

struct CorrespondenceOptions {
  double exact_tol = 1e-12;
  double approx_tol = 1e-2;
};

/// Tests A - I = c_{d-1} F for lags d = 1..K. U may be empty.
CorrespondenceReport correspondence_diagnostic(const DiscretizedSystem& dsys, const Matrix& F, FractionalOrder n,
                                               long K, const SampleSequence& U = {},
                                               const CorrespondenceOptions& opts = {});

}  // namespace descriptor
