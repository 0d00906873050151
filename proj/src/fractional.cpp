#include "descriptor/fractional.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

namespace descriptor {

namespace {

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double inf_norm(const Matrix& a) { return a.size() ? a.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

double lag_delta(const Matrix& a_minus_i, const Matrix& f, double c) { return inf_norm(a_minus_i - c * f); }

double total_mismatch(const Matrix& a_minus_i, const Matrix& f, double n, long K) {
  // Same recurrence as nabla_coefficients, inlined so n may be any real here.
  double c = 1.0, total = 0.0;
  for (long d = 1; d <= K; ++d) {
    total += lag_delta(a_minus_i, f, c);
    c *= (static_cast<double>(d - 1) - n) / static_cast<double>(d);
  }
  return total;
}

}  // namespace

FractionalOrder::FractionalOrder(double n) : n_(n) {
  if (!admissible(n))
    throw Error(ErrorCode::InvalidOrder, "order must satisfy 0 < n < 1 or 1 < n < 2, got " + std::to_string(n));
}

double rising_factorial(double k, double a) {
  if (!std::isfinite(k) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "rising power needs finite arguments");
  const double top = k + a;
  if (nonpositive_integer(k)) {
    if (!nonpositive_integer(top)) return 0.0;
    // Ratio of residues of Gamma at -m' and -m: (-1)^{m-m'} m! / m'!.
    const double m = -k, mp = -top;
    const double sign = std::fmod(std::abs(m - mp), 2.0) == 0.0 ? 1.0 : -1.0;
    return sign * boost::math::tgamma_ratio(m + 1.0, mp + 1.0);
  }
  if (nonpositive_integer(top))
    throw Error(ErrorCode::GammaPole, "Gamma(" + std::to_string(top) + ") is infinite");
  if (a == 0.0) return 1.0;
  if (k > 0.0 && top > 0.0) return boost::math::tgamma_ratio(top, k);
  int sign_top = 1, sign_k = 1;
  const double log_top = boost::math::lgamma(top, &sign_top);
  const double log_k = boost::math::lgamma(k, &sign_k);
  return static_cast<double>(sign_top * sign_k) * std::exp(log_top - log_k);
}

NablaCoefficients nabla_coefficients(FractionalOrder n, long K) {
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "coefficient count must be nonnegative");
  NablaCoefficients out{n, {}};
  out.c.resize(static_cast<size_t>(K + 1));
  out.c[0] = 1.0;
  for (long j = 0; j < K; ++j)
    out.c[static_cast<size_t>(j + 1)] =
        out.c[static_cast<size_t>(j)] * (static_cast<double>(j) - n.value()) / static_cast<double>(j + 1);
  return out;
}

double nabla_coefficient_direct(FractionalOrder n, long j) {
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "coefficient index must be nonnegative");
  return rising_factorial(static_cast<double>(j + 1), -n.value() - 1.0) / boost::math::tgamma(-n.value());
}

Vector nabla_apply(const SampleSequence& seq, FractionalOrder n, long k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "index must be nonnegative");
  if (!seq.covers(0, k))
    throw Error(ErrorCode::InsufficientHistory, "nabla difference at k=" + std::to_string(k) + " needs samples 0.." +
                                                    std::to_string(k));
  const auto c = nabla_coefficients(n, k).c;
  Vector out = Vector::Zero(seq.at(0).size());
  for (long j = 0; j <= k; ++j) out += c[static_cast<size_t>(k - j)] * seq.at(j);
  return out;
}

FractionalSystem make_fractional_system(const Matrix& F, const Matrix& G, FractionalOrder n, const Tolerance& tol) {
  Pencil pencil{F, G};
  pencil.validate();
  if (classify_pencil(pencil, tol) != PencilClass::Regular)
    throw Error(ErrorCode::SingularPencil, "fractional system needs a regular pencil");
  FractionalSystem out{F, G, n, false};
  const Matrix step = F - G;
  out.step_matrix_invertible = rank_and_nullspace<double>(step, tol).rank == step.rows();
  return out;
}

SampleSequence solve_fractional_system(const FractionalSystem& fsys, const SampleSequence& inputs, const Vector& y0,
                                       long K) {
  const Index m = fsys.F.rows();
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "step count must be nonnegative");
  if (y0.size() != m)
    throw Error(ErrorCode::DimensionMismatch, "initial state has " + std::to_string(y0.size()) + " entries, expected " +
                                                  std::to_string(m));
  if (K >= 1 && !inputs.covers(1, K))
    throw Error(ErrorCode::InsufficientHistory, "inputs must cover indices 1.." + std::to_string(K));
  if (!fsys.step_matrix_invertible)
    throw Error(ErrorCode::StepMatrixSingular, "F - G is singular; the implicit step is undefined");

  const auto c = nabla_coefficients(fsys.n, K).c;
  const Eigen::PartialPivLU<Matrix> step(fsys.F - fsys.G);
  SampleSequence y;
  y.start_index = 0;
  y.vectors.push_back(y0);
  for (long k = 1; k <= K; ++k) {
    const Vector& v = inputs.at(k);
    if (v.size() != m) throw Error(ErrorCode::DimensionMismatch, "input sample has wrong length");
    Vector history = Vector::Zero(m);
    for (long j = 0; j < k; ++j) history += c[static_cast<size_t>(k - j)] * y.vectors[static_cast<size_t>(j)];
    y.vectors.push_back(step.solve(v - fsys.F * history));
  }
  return y;
}

SampleSequence telescope_recursion(const Matrix& A, const SampleSequence& U, const Vector& y0, long K) {
  require_square(A.rows(), A.cols(), "A");
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "step count must be nonnegative");
  if (y0.size() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "initial state length differs from A");
  if (K >= 1 && !U.covers(0, K - 1))
    throw Error(ErrorCode::InsufficientHistory, "U must cover indices 0.." + std::to_string(K - 1));
  const Matrix a_minus_i = A - Matrix::Identity(A.rows(), A.cols());
  SampleSequence y;
  y.start_index = 0;
  y.vectors.push_back(y0);
  for (long k = 1; k <= K; ++k) {
    Vector sum = y0;
    for (long j = 0; j < k; ++j) sum += a_minus_i * y.vectors[static_cast<size_t>(j)] + U.at(j);
    y.vectors.push_back(sum);
  }
  return y;
}

CorrespondenceReport correspondence_diagnostic(const DiscretizedSystem& dsys, const Matrix& F, FractionalOrder n,
                                               long K, const SampleSequence& U, const CorrespondenceOptions& opts) {
  if (K < 0) throw Error(ErrorCode::InvalidArgument, "lag count must be nonnegative");
  if (F.rows() != dsys.A.rows() || F.cols() != dsys.A.cols())
    throw Error(ErrorCode::DimensionMismatch, "F and A differ in shape");
  CorrespondenceReport report;
  report.n = n.value();
  const Matrix a_minus_i = dsys.A - Matrix::Identity(dsys.A.rows(), dsys.A.cols());
  const auto c = nabla_coefficients(n, std::max(0L, K - 1)).c;
  for (long d = 1; d <= K; ++d) {
    const double cd = c[static_cast<size_t>(d - 1)];
    LagMismatch lag{d, cd, lag_delta(a_minus_i, F, cd)};
    report.max_delta = std::max(report.max_delta, lag.delta);
    report.lags.push_back(lag);
  }

  if (K == 0) {
    report.best_fit_n = std::numeric_limits<double>::quiet_NaN();
    report.corresponds = true;
    report.verdict = "no lags";
  } else {
    auto objective = [&](double x) { return total_mismatch(a_minus_i, F, x, K); };
    constexpr double kStep = 0.005;
    double best = std::numeric_limits<double>::infinity(), best_n = 0.5;
    for (int i = 1; i < 400; ++i) {
      if (i == 200) continue;  // n = 1 is excluded
      const double x = kStep * i;
      const double val = objective(x);
      if (val < best) best = val, best_n = x;
    }
    const double lo_edge = best_n < 1.0 ? 0.0 : 1.0;
    const double lo = std::max(lo_edge + 1e-9, best_n - kStep);
    const double hi = std::min(lo_edge + 1.0 - 1e-9, best_n + kStep);
    const auto refined = boost::math::tools::brent_find_minima(objective, lo, hi, 40);
    if (refined.second < best) best = refined.second, best_n = refined.first;
    report.best_fit_n = best_n;
    report.best_fit_total = best;
    report.corresponds = report.max_delta <= opts.approx_tol;
    report.verdict = report.max_delta <= opts.exact_tol ? "exact" : report.corresponds ? "approximate" : "fails";
  }

  if (!U.vectors.empty()) {
    const long last = std::min(K, U.end_index());
    report.aggregate_input.start_index = 0;
    Vector w = Vector::Zero(U.vectors.front().size());
    report.aggregate_input.vectors.push_back(w);
    for (long k = 1; k <= last; ++k) {
      w += U.at(k - 1);
      report.aggregate_input.vectors.push_back(w);
    }
  }
  return report;
}

}  // namespace descriptor
