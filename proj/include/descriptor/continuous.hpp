#pragma once

#include <string>
#include <vector>

#include "descriptor/linalg.hpp"
#include "descriptor/pencil.hpp"
#include "descriptor/signal.hpp"

namespace descriptor {

/// F Y'(t) = G Y(t) + B V(t) with its Weierstrass decomposition cached.
struct DescriptorSystem {
  Pencil pencil;
  Matrix B;
  WeierstrassDecomposition dec;
  CMatrix Bp;  ///< top p rows of P B
  CMatrix Bq;  ///< bottom q rows of P B
  Tolerance tol;

  Index m() const { return pencil.size(); }
  Index r() const { return B.cols(); }
  Index p() const { return dec.p; }
  Index q() const { return dec.q; }
};

DescriptorSystem build_system(const Matrix& F, const Matrix& G, const Matrix& B,
                              const DecompositionOptions& opts = {});

/// Same, with the decomposition computed in exact arithmetic.
DescriptorSystem build_system(const ExactPencil& pencil, const Matrix& B, const Tolerance& tol = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  double decomposition_residual_F = 0.0;
  double decomposition_residual_G = 0.0;
  Tolerance tol;
};

struct ConsistencyReport {
  bool consistent = false;
  CVector K_t0;          ///< K(t0) in decoupled coordinates
  Vector projected_Y0;   ///< nearest consistent initial state (Euclidean)
  double defect = 0.0;   ///< distance from Y0 - Q K(t0) to colspan Q_p
};

/// n equally spaced points from t0 to t1 inclusive.
std::vector<double> uniform_grid(double t0, double t1, Index n);

/// [ integral_{t0}^{t} e^{Jp (t-s)} Bp V(s) ds ; -sum_{i<q*} Hq^i Bq V^{(i)}(t) ]
CVector K_vector(const DescriptorSystem& sys, const InputSignal& v, double t, double t0);

ConsistencyReport consistency_check(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v, double t0);

/// Y(t) = Qp e^{Jp (t-t0)} Zp(t0) + Q K(t) on each grid point.
/// Throws InconsistentInitialCondition when consistency_check fails.
Trajectory solve_continuous(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v,
                            const std::vector<double>& t_grid, double t0);

/// Q blockdiag(e^{Jp (t-t0)}, I_q) Q^{-1}.
Matrix fundamental_matrix(const WeierstrassDecomposition& dec, double t, double t0);

/// Y(t) = F(t,t0) Y0 + integral F(t,s) Qp Bp V(s) ds + Qq sum Hq^i Bq (V^{(i)}(t0) - V^{(i)}(t)).
Trajectory solve_via_fundamental(const DescriptorSystem& sys, const Vector& y0, const InputSignal& v,
                                 const std::vector<double>& t_grid, double t0);

/// max over interior points of |F Y' - G Y - B V|_inf with Y' from central
/// differences. Needs a uniform grid of at least 3 points.
double residual_check(const DescriptorSystem& sys, const Trajectory& traj, const InputSignal& v);

/// Max-abs pointwise difference between two trajectories on the same grid.
double max_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace descriptor
