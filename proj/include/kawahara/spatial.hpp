#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "kawahara/errors.hpp"

namespace kawahara {

/// Uniform grid on (0,L) with N interior nodes, h = L/(N+1). Derivative
/// operators act on interior-node vectors; the five boundary conditions
/// u(0)=u(L)=u'(0)=u'(L)=u''(L)=0 are folded in by ghost-node elimination.
struct SpatialDiscretization {
  double L = 0.0;
  int N = 0;
  double h = 0.0;
  int scheme_order = 2;

  Eigen::VectorXd x;       // interior nodes x_i = i*h, i = 1..N
  Eigen::VectorXd quad_w;  // trapezoid weights on interior nodes (all h); the
                           // two boundary halves add another h, so the full
                           // rule sums to L
  Eigen::SparseMatrix<double> D1, D2, D3, D5;
  Eigen::RowVectorXd boundary_trace_uxx0;  // one-sided u''(0) functional
};

struct EmbeddingConstants {
  double M_P = 0.0;        // Poincare: ||v||^2 <= M_P ||v'||^2
  double M_S = 0.0;        // Sobolev bound used by the checkers (analytic, conservative)
  double M_S_probe = 0.0;  // numeric lower bound from probe functions (diagnostic)
};

SpatialDiscretization build_discretization(double L, int N, int scheme_order = 2);

/// M_P = 1/lambda_min(-D2) by inverse iteration; M_S analytic bound 1 + 1/L
/// alongside the probe-basis lower bound.
EmbeddingConstants estimate_constants(const SpatialDiscretization& disc);

double inner(const SpatialDiscretization& disc, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w);
double norm_L2(const SpatialDiscretization& disc, const Eigen::VectorXd& v);
double norm_Hk(const SpatialDiscretization& disc, const Eigen::VectorXd& v, int k);

}  // namespace kawahara
