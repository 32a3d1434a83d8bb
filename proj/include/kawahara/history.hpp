#pragma once

#include <Eigen/Dense>
#include <functional>

#include "kawahara/kernel.hpp"
#include "kawahara/spatial.hpp"

namespace kawahara {

enum class HistoryMode { Grid, ExponentialODE };

/// Discrete history field eta^t(x,s).
///
/// Grid mode keeps eta on a geometric s-grid with g and g' folded into
/// quadrature weights; the transport update is semi-Lagrangian. The
/// ExponentialODE mode is the exact fast path for exponential kernels: it
/// stores only m(x,t) = int g(s) eta^t(x,s) ds plus the scalar
/// n2 = int g(s) ||D^k eta||^2 ds needed by the energy, both advanced by the
/// closed-form solution of dm/dt = g0*u - q1*m.
struct HistoryField {
  HistoryMode mode = HistoryMode::Grid;
  int k = 0;

  // Grid mode
  Eigen::VectorXd s_nodes;  // increasing, s_nodes[0] = 0
  Eigen::VectorXd w;        // trapezoid weights with g folded in
  Eigen::VectorXd w_gp;     // same weights with g' folded in
  Eigen::MatrixXd eta;      // (s-node) x (interior x-node)

  // ExponentialODE mode
  Eigen::VectorXd m;
  double n2 = 0.0;
  double q1 = 0.0, g0 = 0.0;
};

/// Geometric s-grid s_j = S*(r^j - 1)/(r^M - 1), j = 0..M.
Eigen::VectorXd geometric_s_grid(double S_max, int M, double ratio = 1.15);

/// eta^0(x,s) = int_0^s u0_history(x,tau) dtau on the s-grid (composite Gauss
/// in tau). ExponentialODE mode reduces the same field to (m, n2).
HistoryField init_history(const std::function<double(double, double)>& u0_history,
                          const SpatialDiscretization& disc, const MemoryKernel& kernel,
                          double S_max, int M_s, HistoryMode mode = HistoryMode::Grid,
                          int k = 0, double ratio = 1.15);

/// One transport step. Grid: shift-and-interpolate by dt along s with inflow 0
/// and trapezoid source (u_old+u_new)/2; ExponentialODE: exact exponential
/// integrator with u linear over the step.
void advance_history(HistoryField& hist, const SpatialDiscretization& disc,
                     const Eigen::VectorXd& u_old, const Eigen::VectorXd& u_new, double dt);

/// (-1)^k D^{2k} int g(s) eta(.,s) ds as an interior-node vector.
Eigen::VectorXd memory_integral(const HistoryField& hist, const SpatialDiscretization& disc,
                                int k);

/// ||eta||_{L_g} = (int g(s) ||D^k eta(.,s)||^2 ds)^{1/2}.
double memory_norm(const HistoryField& hist, const SpatialDiscretization& disc, int k);

/// (1/2) int g'(s) ||D^k eta(.,s)||^2 ds (nonpositive for admissible kernels).
double memory_dissipation(const HistoryField& hist, const SpatialDiscretization& disc, int k,
                          const MemoryKernel& kernel);

}  // namespace kawahara
