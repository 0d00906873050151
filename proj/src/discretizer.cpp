#include "descriptor/discretizer.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/binomial.hpp>

namespace descriptor {

namespace {

constexpr double kImagTol = 1e-8;

double binomial(int n, int k) { return boost::math::binomial_coefficient<double>(unsigned(n), unsigned(k)); }

Matrix real_block(const CMatrix& m, const char* what) { return real_part_checked(m, kImagTol, what); }

}  // namespace

const Vector& SampleSequence::at(long k) const {
  if (k < start_index || k >= end_index())
    throw Error(ErrorCode::InsufficientHistory, "sample " + std::to_string(k) + " not available (have " +
                                                    std::to_string(start_index) + ".." +
                                                    std::to_string(end_index() - 1) + ")");
  return vectors[static_cast<size_t>(k - start_index)];
}

Vector backward_diff(const SampleSequence& samples, long k, int i, double T) {
  if (i < 0) throw Error(ErrorCode::InvalidArgument, "difference order must be nonnegative");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling period must be positive");
  if (!samples.covers(k - i, k))
    throw Error(ErrorCode::InsufficientHistory, "backward difference of order " + std::to_string(i) + " at k=" +
                                                    std::to_string(k) + " needs samples from " + std::to_string(k - i));
  Vector out = Vector::Zero(samples.at(k).size());
  for (int j = 0; j <= i; ++j) {
    const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
    out += sign * binomial(i, j) * samples.at(k - i + j);
  }
  return out / std::pow(T, i);
}

std::vector<double> fast_correction_coeffs(int i) {
  if (i < 0) throw Error(ErrorCode::InvalidArgument, "correction order must be nonnegative");
  std::vector<double> w(static_cast<size_t>(i + 2));
  for (int j = 0; j <= i + 1; ++j) w[static_cast<size_t>(j)] = ((j + 1) % 2 == 0 ? 1.0 : -1.0) * binomial(i + 1, j);
  return w;
}

DiscretizedSystem discretize(const DescriptorSystem& sys, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "sampling period must be positive");
  const auto& dec = sys.dec;
  DiscretizedSystem d;
  d.T = T;
  d.A = fundamental_matrix(dec, T, 0.0);
  if (dec.p > 0)
    d.Phi_int = real_block(dec.Qp() * exp_integral(dec.Jp, T) * sys.Bp, "slow input map");
  else
    d.Phi_int = Matrix::Zero(sys.m(), sys.r());
  d.q_star = dec.q_star;
  d.memory_depth = dec.q_star + 1;
  CMatrix hpow = CMatrix::Identity(dec.q, dec.q);
  for (int i = 0; i < dec.q_star; ++i) {
    d.fast_coeffs.push_back(real_block(dec.Qq() * hpow * sys.Bq, "fast input map") / std::pow(T, i));
    hpow = (hpow * dec.Hq).eval();
  }
  return d;
}

Vector input_term(const DiscretizedSystem& dsys, const SampleSequence& inputs, long k) {
  Vector u = dsys.Phi_int * inputs.at(k);
  // Each fast term approximates Qq Hq^i Bq (V^{(i)}_k - V^{(i)}_{k+1}) = -Qq Hq^i Bq T nabla^{i+1} V_{k+1} / T^{i+1};
  // the alternating weights carry (-1)^i relative to that stencil, hence the extra sign.
  for (int i = 0; i < dsys.q_star; ++i) {
    const auto w = fast_correction_coeffs(i);
    const double sign = (i % 2 == 0) ? -1.0 : 1.0;
    Vector diff = Vector::Zero(inputs.at(k).size());
    for (int j = 0; j <= i + 1; ++j) diff += w[static_cast<size_t>(j)] * inputs.at(k - i + j);
    u += sign * (dsys.fast_coeffs[static_cast<size_t>(i)] * diff);
  }
  return u;
}

DiscreteSimulation discrete_simulate(const DiscretizedSystem& dsys, const Vector& y0, const SampleSequence& inputs,
                                     long steps, bool extend_history) {
  if (y0.size() != dsys.A.rows())
    throw Error(ErrorCode::DimensionMismatch, "initial state has " + std::to_string(y0.size()) + " entries, expected " +
                                                  std::to_string(dsys.A.rows()));
  for (const auto& v : inputs.vectors)
    if (v.size() != dsys.Phi_int.cols()) throw Error(ErrorCode::DimensionMismatch, "input sample has wrong length");
  if (inputs.start_index > 0 || inputs.end_index() <= 0)
    throw Error(ErrorCode::InsufficientHistory, "input samples must include index 0");

  // U_k reads V_{k+1} when a fast part exists, so K steps need samples up to K (or K-1).
  const long lookahead = dsys.q_star > 0 ? 1 : 0;
  const long available = inputs.end_index() - 1 - lookahead + 1;
  if (steps < 0) steps = std::max(0L, available);
  if (steps > available)
    throw Error(ErrorCode::InsufficientHistory, std::to_string(steps) + " steps need input samples up to index " +
                                                    std::to_string(steps - 1 + lookahead));

  DiscreteSimulation sim;
  SampleSequence v = inputs;
  const long first_needed = -(static_cast<long>(dsys.q_star) - 1);
  if (dsys.q_star > 1 && v.start_index > first_needed) {
    if (!extend_history)
      throw Error(ErrorCode::InsufficientHistory, "fast correction needs input samples from index " +
                                                      std::to_string(first_needed));
    const Vector v0 = inputs.at(0);
    std::vector<Vector> padded(static_cast<size_t>(v.start_index - first_needed), v0);
    padded.insert(padded.end(), v.vectors.begin(), v.vectors.end());
    v.vectors = std::move(padded);
    v.start_index = first_needed;
    sim.history_extended = true;
  }

  sim.states.start_index = 0;
  sim.states.vectors.push_back(y0);
  sim.inputs.start_index = 0;
  Vector y = y0;
  for (long k = 0; k < steps; ++k) {
    Vector u = input_term(dsys, v, k);
    y = dsys.A * y + u;
    sim.inputs.vectors.push_back(std::move(u));
    sim.states.vectors.push_back(y);
  }
  return sim;
}

SampleSequence sample_signal(const InputSignal& v, double t0, double T, long first, long last) {
  SampleSequence s;
  s.start_index = first;
  for (long k = first; k <= last; ++k) s.vectors.push_back(v.value(t0 + static_cast<double>(k) * T));
  return s;
}

namespace {

struct RunResult {
  double error = 0.0;
  double scale = 0.0;
  std::vector<double> times;
  std::vector<Vector> discrete, continuous;
};

RunResult run_once(const DescriptorSystem& sys, const DiscretizedSystem& dsys, const Vector& y0, const InputSignal& v,
                   long steps, double t0) {
  const long first = std::min(0L, -(static_cast<long>(dsys.q_star) - 1));
  const auto inputs = sample_signal(v, t0, dsys.T, first, steps);
  const auto sim = discrete_simulate(dsys, y0, inputs, steps, false);
  RunResult out;
  for (long k = 0; k <= steps; ++k) out.times.push_back(t0 + static_cast<double>(k) * dsys.T);
  const auto traj = solve_continuous(sys, y0, v, out.times, t0);
  out.discrete = sim.states.vectors;
  out.continuous = traj.states;
  for (size_t k = 0; k < out.times.size(); ++k) {
    out.error = std::max(out.error, (out.discrete[k] - out.continuous[k]).cwiseAbs().maxCoeff());
    out.scale = std::max(out.scale, out.continuous[k].cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace

ComparisonResult compare_with_continuous(const DescriptorSystem& sys, const DiscretizedSystem& dsys, const Vector& y0,
                                         const InputSignal& v, long steps, double t0) {
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "step count must be nonnegative");
  ComparisonResult result;
  auto coarse = run_once(sys, dsys, y0, v, steps, t0);
  result.max_error = coarse.error;
  result.times = std::move(coarse.times);
  result.discrete = std::move(coarse.discrete);
  result.continuous = std::move(coarse.continuous);

  const auto fine = run_once(sys, discretize(sys, dsys.T / 2.0), y0, v, 2 * steps, t0);
  result.max_error_half = fine.error;
  const double floor = 1e-12 * std::max(1.0, coarse.scale);
  if (steps == 0 || result.max_error <= floor || result.max_error_half <= 0.0)
    result.observed_order = std::numeric_limits<double>::quiet_NaN();
  else
    result.observed_order = std::log2(result.max_error / result.max_error_half);
  return result;
}

}  // namespace descriptor
