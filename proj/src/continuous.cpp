#include "descriptor/continuous.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace descriptor {

namespace {

constexpr double kImagTol = 1e-8;

/// integral_{t0}^{t} e^{A (t-s)} Bm V(s) ds for a p x p generator A.
CVector convolution(const CMatrix& a, const CMatrix& bm, const InputSignal& v, double t0, double t) {
  const Index p = a.rows();
  CVector out = CVector::Zero(p);
  if (p == 0 || t == t0) return out;

  for (const auto& component : v.components()) {
    if (auto gen = InputSignal::generator(component)) {
      const Index n = gen->S.rows();
      CMatrix aug = CMatrix::Zero(p + n, p + n);
      aug.topLeftCorner(p, p) = a;
      aug.topRightCorner(p, n) = bm * gen->C.cast<Complex>();
      aug.bottomRightCorner(n, n) = gen->S.cast<Complex>();
      const CMatrix e = mat_exp(aug, t - t0);
      out += e.topRightCorner(p, n) * gen->state(t0).cast<Complex>();
    } else if (const auto* s = std::get_if<InputSignal::Samples>(&component)) {
      if (t < t0) throw Error(ErrorCode::InvalidArgument, "sample-and-hold inputs need t >= t0");
      const auto last = static_cast<Index>(s->values.size()) - 1;
      double lo = t0;
      Index k = InputSignal::sample_index(*s, lo);
      while (lo < t) {
        const double edge = s->start + static_cast<double>(k + 1) * s->period;
        const double hi = (k == last) ? t : std::min(t, edge);
        if (hi > lo) {
          const CVector vk = s->values[static_cast<size_t>(k)].cast<Complex>();
          out += mat_exp(a, t - hi) * exp_integral(a, hi - lo) * (bm * vk);
        }
        lo = hi;
        ++k;
        if (k > last) k = last;
      }
    } else {
      const auto& custom = std::get<InputSignal::Custom>(component);
      // Component-wise adaptive Gauss-Kronrod on the real and imaginary parts.
      for (Index i = 0; i < p; ++i) {
        for (int part = 0; part < 2; ++part) {
          auto integrand = [&](double s) {
            const CVector val = mat_exp(a, t - s) * (bm * custom.fn(s, 0).cast<Complex>());
            return part == 0 ? val(i).real() : val(i).imag();
          };
          const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, t0, t, 15, 1e-12);
          out(i) += part == 0 ? Complex(value, 0.0) : Complex(0.0, value);
        }
      }
    }
  }
  return out;
}

/// -sum_{i<q*} Hq^i Bq V^{(i)}(t), the fast-subsystem state.
CVector fast_state(const DescriptorSystem& sys, const InputSignal& v, double t) {
  const auto& dec = sys.dec;
  CVector out = CVector::Zero(dec.q);
  if (dec.q == 0) return out;
  if (dec.q_star - 1 > v.max_derivative_order())
    throw Error(ErrorCode::DerivativeUnavailable, "fast subsystem needs input derivatives up to order " +
                                                      std::to_string(dec.q_star - 1));
  CMatrix hpow = CMatrix::Identity(dec.q, dec.q);
  for (int i = 0; i < dec.q_star; ++i) {
    out -= hpow * (sys.Bq * v.derivative(t, i).cast<Complex>());
    hpow = (hpow * dec.Hq).eval();
  }
  return out;
}

void check_input(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v) {
  if (y0.size() != sys.m())
    throw Error(ErrorCode::DimensionMismatch, "initial state has " + std::to_string(y0.size()) + " entries, expected " +
                                                  std::to_string(sys.m()));
  if (v.dimension() != sys.r())
    throw Error(ErrorCode::DimensionMismatch, "input has dimension " + std::to_string(v.dimension()) +
                                                  ", B has " + std::to_string(sys.r()) + " columns");
}

Vector real_state(const CVector& y) {
  const double scale = std::max(1.0, y.size() ? y.cwiseAbs().maxCoeff() : 0.0);
  const double imag = y.size() ? y.imag().cwiseAbs().maxCoeff() : 0.0;
  if (imag > kImagTol * scale)
    throw Error(ErrorCode::IllConditioned, "solution has imaginary residue " + std::to_string(imag));
  return y.real();
}

Trajectory make_trajectory(const DescriptorSystem& sys, const std::vector<double>& t_grid) {
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "time grid must be strictly increasing");
  Trajectory traj;
  traj.times = t_grid;
  traj.tol = sys.tol;
  const auto res = verify_decomposition(sys.dec, sys.pencil);
  traj.decomposition_residual_F = res.res_F;
  traj.decomposition_residual_G = res.res_G;
  return traj;
}

CMatrix slow_fundamental(const WeierstrassDecomposition& dec, double tau) {
  const Index m = dec.size();
  CMatrix mid = CMatrix::Identity(m, m);
  if (dec.p > 0) mid.topLeftCorner(dec.p, dec.p) = mat_exp(dec.Jp, tau);
  return dec.Q * mid * dec.Q_inv;
}

}  // namespace

DescriptorSystem build_system(const Matrix& F, const Matrix& G, const Matrix& B, const DecompositionOptions& opts) {
  DescriptorSystem sys;
  sys.pencil = {F, G};
  sys.pencil.validate();
  if (B.rows() != F.rows())
    throw Error(ErrorCode::DimensionMismatch, "B has " + std::to_string(B.rows()) + " rows, expected " +
                                                  std::to_string(F.rows()));
  sys.B = B;
  sys.tol = opts.tol;
  sys.dec = weierstrass_decompose(sys.pencil, opts);
  const CMatrix pb = sys.dec.P * B.cast<Complex>();
  sys.Bp = pb.topRows(sys.dec.p);
  sys.Bq = pb.bottomRows(sys.dec.q);
  return sys;
}

DescriptorSystem build_system(const ExactPencil& pencil, const Matrix& B, const Tolerance& tol) {
  pencil.validate();
  if (B.rows() != pencil.size())
    throw Error(ErrorCode::DimensionMismatch, "B has " + std::to_string(B.rows()) + " rows, expected " +
                                                  std::to_string(pencil.size()));
  DescriptorSystem sys;
  sys.pencil = {to_double(pencil.F), to_double(pencil.G)};
  sys.B = B;
  sys.tol = tol;
  sys.dec = to_complex(weierstrass_decompose(pencil));
  const CMatrix pb = sys.dec.P * B.cast<Complex>();
  sys.Bp = pb.topRows(sys.dec.p);
  sys.Bq = pb.bottomRows(sys.dec.q);
  return sys;
}

std::vector<double> uniform_grid(double t0, double t1, Index n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<double> out(static_cast<size_t>(n));
  const double h = n > 1 ? (t1 - t0) / static_cast<double>(n - 1) : 0.0;
  for (Index i = 0; i < n; ++i) out[static_cast<size_t>(i)] = t0 + h * static_cast<double>(i);
  if (n > 1) out.back() = t1;
  return out;
}

CVector K_vector(const DescriptorSystem& sys, const InputSignal& v, double t, double t0) {
  if (v.dimension() != sys.r()) throw Error(ErrorCode::DimensionMismatch, "input dimension differs from B");
  CVector k(sys.m());
  k.head(sys.p()) = convolution(sys.dec.Jp, sys.Bp, v, t0, t);
  k.tail(sys.q()) = fast_state(sys, v, t);
  return k;
}

ConsistencyReport consistency_check(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v, double t0) {
  check_input(sys, y0, v);
  ConsistencyReport report;
  report.K_t0 = K_vector(sys, v, t0, t0);
  const Vector forced = real_state(sys.dec.Q * report.K_t0);
  const Vector d = y0 - forced;
  Vector proj = Vector::Zero(sys.m());
  if (sys.p() > 0) {
    const CMatrix qp = sys.dec.Qp();
    const CVector coeffs = qp.colPivHouseholderQr().solve(d.cast<Complex>());
    proj = (qp * coeffs).real();
  }
  report.defect = (d - proj).norm();
  report.projected_Y0 = forced + proj;
  report.consistent = report.defect <= sys.tol.residual_tol;
  return report;
}

Trajectory solve_continuous(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v,
                            const std::vector<double>& t_grid, double t0) {
  const auto report = consistency_check(sys, y0, v, t0);
  if (!report.consistent)
    throw Error(ErrorCode::InconsistentInitialCondition,
                "Y(t0) is not in colspan Qp + Q K(t0) (defect " + std::to_string(report.defect) + ")");
  Trajectory traj = make_trajectory(sys, t_grid);
  const auto& dec = sys.dec;
  const CVector zp0 = (dec.Q_inv * y0.cast<Complex>()).head(dec.p);
  const CMatrix qp = dec.Qp();
  for (double t : t_grid) {
    CVector y = dec.Q * K_vector(sys, v, t, t0);
    if (dec.p > 0) y += qp * (mat_exp(dec.Jp, t - t0) * zp0);
    traj.states.push_back(real_state(y));
  }
  return traj;
}

Matrix fundamental_matrix(const WeierstrassDecomposition& dec, double t, double t0) {
  return real_part_checked(slow_fundamental(dec, t - t0), kImagTol, "fundamental matrix");
}

Trajectory solve_via_fundamental(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v,
                                 const std::vector<double>& t_grid, double t0) {
  const auto report = consistency_check(sys, y0, v, t0);
  if (!report.consistent)
    throw Error(ErrorCode::InconsistentInitialCondition,
                "Y(t0) is not in colspan Qp + Q K(t0) (defect " + std::to_string(report.defect) + ")");
  Trajectory traj = make_trajectory(sys, t_grid);
  const auto& dec = sys.dec;
  const Index m = sys.m();

  // Generator of F(t, s) = exp(A_slow (t - s)) in the original coordinates.
  CMatrix mid = CMatrix::Zero(m, m);
  mid.topLeftCorner(dec.p, dec.p) = dec.Jp;
  const CMatrix a_slow = dec.Q * mid * dec.Q_inv;
  const CMatrix slow_input = dec.Qp() * sys.Bp;
  const CMatrix qq = dec.Qq();

  std::vector<CVector> hb_t0;
  CMatrix hpow = CMatrix::Identity(dec.q, dec.q);
  for (int i = 0; i < dec.q_star; ++i) {
    hb_t0.push_back(hpow * (sys.Bq * v.derivative(t0, i).cast<Complex>()));
    hpow = (hpow * dec.Hq).eval();
  }

  for (double t : t_grid) {
    CVector y = (fundamental_matrix(dec, t, t0) * y0).cast<Complex>();
    y += convolution(a_slow, slow_input, v, t0, t);
    if (dec.q > 0) {
      CVector fast = CVector::Zero(dec.q);
      hpow = CMatrix::Identity(dec.q, dec.q);
      for (int i = 0; i < dec.q_star; ++i) {
        fast += hb_t0[static_cast<size_t>(i)] - hpow * (sys.Bq * v.derivative(t, i).cast<Complex>());
        hpow = (hpow * dec.Hq).eval();
      }
      y += qq * fast;
    }
    traj.states.push_back(real_state(y));
  }
  return traj;
}

double residual_check(const DescriptorSystem& sys, const Trajectory& traj, const InputSignal& v) {
  const size_t n = traj.times.size();
  if (n < 3 || traj.states.size() != n)
    throw Error(ErrorCode::GridTooCoarse, "residual check needs at least 3 grid points");
  const double h = (traj.times.back() - traj.times.front()) / static_cast<double>(n - 1);
  for (size_t i = 1; i < n; ++i)
    if (std::abs((traj.times[i] - traj.times[i - 1]) - h) > 1e-9 * std::abs(h))
      throw Error(ErrorCode::InvalidArgument, "residual check needs a uniform grid");
  double worst = 0.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    const Vector dy = (traj.states[i + 1] - traj.states[i - 1]) / (2.0 * h);
    const Vector res = sys.pencil.F * dy - sys.pencil.G * traj.states[i] - sys.B * v.value(traj.times[i]);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

double max_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size()) throw Error(ErrorCode::DimensionMismatch, "trajectories differ in length");
  double worst = 0.0;
  for (size_t i = 0; i < a.states.size(); ++i)
    worst = std::max(worst, (a.states[i] - b.states[i]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace descriptor
