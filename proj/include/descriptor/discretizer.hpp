#pragma once

#include <vector>

#include "descriptor/continuous.hpp"

namespace descriptor {

/// Vectors indexed start_index, start_index+1, ...
struct SampleSequence {
  long start_index = 0;
  std::vector<Vector> vectors;

  long end_index() const { return start_index + static_cast<long>(vectors.size()); }  ///< one past the last
  bool covers(long first, long last) const { return first >= start_index && last < end_index(); }
  const Vector& at(long k) const;
};

/// Y_{k+1} = A Y_k + U_k under zero-order hold with sampling period T.
struct DiscretizedSystem {
  double T = 0.0;
  Matrix A;                        ///< fundamental matrix over one period
  Matrix Phi_int;                  ///< Qp (int_0^T e^{Jp l} dl) Bp, m x r
  std::vector<Matrix> fast_coeffs; ///< Qq Hq^i Bq / T^i for i < q*
  int q_star = 0;
  int memory_depth = 0;            ///< input samples V_{k-q*+1} .. V_{k+1} used by U_k
};

/// sum_{j=0}^{i} (-1)^{i-j} C(i,j) V_{k-i+j} / T^i
Vector backward_diff(const SampleSequence& samples, long k, int i, double T);

/// ((-1)^{j+1} C(i+1, j)) for j = 0..i+1, applied to V_{k-i} .. V_{k+1}.
std::vector<double> fast_correction_coeffs(int i);

DiscretizedSystem discretize(const DescriptorSystem& sys, double T);

/// U_k from the input samples V_{k-q*+1} .. V_{k+1}.
Vector input_term(const DiscretizedSystem& dsys, const SampleSequence& inputs, long k);

struct DiscreteSimulation {
  SampleSequence states;  ///< Y_0 .. Y_K
  SampleSequence inputs;  ///< U_0 .. U_{K-1}
  bool history_extended = false;  ///< pre-history was filled with V_0
};

/// Iterates the recursion for `steps` steps (default: as many as the inputs allow).
/// Missing samples before index 0 are filled with V_0 unless extend_history is false.
DiscreteSimulation discrete_simulate(const DiscretizedSystem& dsys, const Vector& y0, const SampleSequence& inputs,
                                     long steps = -1, bool extend_history = true);

/// V(t0 + kT) for k = first .. last.
SampleSequence sample_signal(const InputSignal& v, double t0, double T, long first, long last);

struct ComparisonResult {
  double max_error = 0.0;       ///< max_k |Y_k - Y(t0 + kT)|_inf at period T
  double max_error_half = 0.0;  ///< same quantity at period T/2 over the same horizon
  double observed_order = 0.0;  ///< log2(max_error / max_error_half); NaN at roundoff level
  std::vector<double> times;
  std::vector<Vector> discrete;
  std::vector<Vector> continuous;
};

/// Runs both models from a consistent Y0 over `steps` periods. Pre-history
/// samples come from the signal itself.
ComparisonResult compare_with_continuous(const DescriptorSystem& sys, const DiscretizedSystem& dsys, const Vector& y0,
                                         const InputSignal& v, long steps, double t0 = 0.0);

}  // namespace descriptor
