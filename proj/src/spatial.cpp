#include "kawahara/spatial.hpp"

#include <cmath>
#include <vector>

#include "kawahara/fornberg.hpp"

namespace kawahara {

namespace {

// Extension operator: interior values u_1..u_N -> extended grid
// [-1, 0, 1..N, N+1, N+2, N+3] (extended index e <-> grid index e-1).
// u_0 = u_{N+1} = 0; the left ghost u_{-1} comes from a one-sided stencil for
// u'(0) = 0, the right ghosts u_{N+2}, u_{N+3} from a 2x2 solve of
// u'(L) = u''(L) = 0. Stencil widths grow with the scheme order so the ghost
// error stays below the target order after division by h^5.
Eigen::MatrixXd build_ext(int N, double h, int scheme_order) {
  const int ln = scheme_order == 2 ? 8 : 10;   // left BC stencil nodes -1..ln-2
  const int rn = scheme_order == 2 ? 9 : 11;   // right BC stencil nodes N+4-rn..N+3
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N + 5, N);
  for (int i = 1; i <= N; ++i) E(i + 1, i - 1) = 1.0;

  {
    Eigen::VectorXd nodes(ln);
    for (int j = 0; j < ln; ++j) nodes[j] = (j - 1) * h;
    const Eigen::VectorXd w = fd_weights(0.0, nodes, 1);
    // w[0]*u_{-1} + w[1]*u_0 + sum_{j>=2} w[j]*u_{j-1} = 0, u_0 = 0
    for (int j = 2; j < ln; ++j) E(0, j - 2) += -w[j] / w[0];
  }
  {
    Eigen::VectorXd nodes(rn);
    std::vector<int> idx(rn);
    for (int j = 0; j < rn; ++j) {
      idx[j] = N + 4 - rn + j;
      nodes[j] = idx[j] * h;
    }
    const double Lx = (N + 1) * h;
    const Eigen::VectorXd w1 = fd_weights(Lx, nodes, 1);
    const Eigen::VectorXd w2 = fd_weights(Lx, nodes, 2);
    Eigen::Matrix2d A;
    A << w1[rn - 2], w1[rn - 1], w2[rn - 2], w2[rn - 1];
    for (int p = 0; p < rn - 3; ++p) {  // known interior nodes; u_{N+1} = 0
      Eigen::Vector2d rhs(-w1[p], -w2[p]);
      const Eigen::Vector2d ab = A.partialPivLu().solve(rhs);
      const int col = idx[p] - 1;
      E(N + 3, col) += ab[0];
      E(N + 4, col) += ab[1];
    }
  }
  return E;
}

Eigen::SparseMatrix<double> build_D(int N, double h, int m, int order,
                                    const Eigen::MatrixXd& E) {
  int W = m + order - 1;
  if (W % 2 == 0) ++W;
  const int half = W / 2;
  const int Wb = std::max(W, m + order);  // biased width keeps the order one-sided

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N + 5);
  for (int i = 1; i <= N; ++i) {
    int lo = i - half, hi = i + half;
    if (lo < -1) {
      lo = -1;
      hi = lo + Wb - 1;
    } else if (hi > N + 3) {
      hi = N + 3;
      lo = hi - Wb + 1;
    }
    Eigen::VectorXd nodes(hi - lo + 1);
    for (int p = 0; p < nodes.size(); ++p) nodes[p] = (lo + p) * h;
    const Eigen::VectorXd w = fd_weights(i * h, nodes, m);
    for (int p = 0; p < nodes.size(); ++p) S(i - 1, lo + p + 1) += w[p];
  }
  const Eigen::MatrixXd D = S * E;
  Eigen::SparseMatrix<double> Ds(N, N);
  std::vector<Eigen::Triplet<double>> trips;
  const double drop = 1e-14 * D.cwiseAbs().maxCoeff();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (std::abs(D(i, j)) > drop) trips.emplace_back(i, j, D(i, j));
  Ds.setFromTriplets(trips.begin(), trips.end());
  return Ds;
}

}  // namespace

SpatialDiscretization build_discretization(double L, int N, int scheme_order) {
  if (L <= 0.0) throw ParameterOutOfRange("domain length must be positive");
  if (scheme_order != 2 && scheme_order != 4)
    throw ParameterOutOfRange("scheme order must be 2 or 4");
  const int min_N = scheme_order == 2 ? 32 : 32;
  if (N < min_N) throw GridTooCoarse("need at least 32 interior nodes");

  SpatialDiscretization d;
  d.L = L;
  d.N = N;
  d.h = L / (N + 1);
  d.scheme_order = scheme_order;
  d.x.resize(N);
  for (int i = 0; i < N; ++i) d.x[i] = (i + 1) * d.h;
  d.quad_w = Eigen::VectorXd::Constant(N, d.h);

  const Eigen::MatrixXd E = build_ext(N, d.h, scheme_order);
  d.D1 = build_D(N, d.h, 1, scheme_order, E);
  d.D3 = build_D(N, d.h, 3, scheme_order, E);
  d.D5 = build_D(N, d.h, 5, scheme_order, E);

  // D2 stays the plain Dirichlet 3-point operator: exactly symmetric negative
  // definite, which the energy identity and M_P both rely on
  {
    std::vector<Eigen::Triplet<double>> trips;
    const double ih2 = 1.0 / (d.h * d.h);
    for (int i = 0; i < N; ++i) {
      trips.emplace_back(i, i, -2.0 * ih2);
      if (i > 0) trips.emplace_back(i, i - 1, ih2);
      if (i + 1 < N) trips.emplace_back(i, i + 1, ih2);
    }
    d.D2.resize(N, N);
    d.D2.setFromTriplets(trips.begin(), trips.end());
  }

  // one-sided u''(0) over nodes 0..4 with u_0 = 0
  {
    Eigen::VectorXd nodes(5);
    for (int j = 0; j < 5; ++j) nodes[j] = j * d.h;
    const Eigen::VectorXd w = fd_weights(0.0, nodes, 2);
    d.boundary_trace_uxx0 = Eigen::RowVectorXd::Zero(N);
    for (int j = 1; j < 5; ++j) d.boundary_trace_uxx0[j - 1] = w[j];
  }
  return d;
}

double inner(const SpatialDiscretization& disc, const Eigen::VectorXd& v,
             const Eigen::VectorXd& w) {
  if (v.size() != disc.N || w.size() != disc.N)
    throw DimensionMismatch("vector length does not match the grid");
  return disc.h * v.dot(w);
}

double norm_L2(const SpatialDiscretization& disc, const Eigen::VectorXd& v) {
  return std::sqrt(inner(disc, v, v));
}

double norm_Hk(const SpatialDiscretization& disc, const Eigen::VectorXd& v, int k) {
  if (k < 0 || k > 2) throw ParameterOutOfRange("norm_Hk supports k in {0,1,2}");
  double acc = inner(disc, v, v);
  if (k >= 1) {
    const Eigen::VectorXd dv = disc.D1 * v;
    acc += inner(disc, dv, dv);
  }
  if (k == 2) {
    const Eigen::VectorXd d2v = disc.D2 * v;
    acc += inner(disc, d2v, d2v);
  }
  return std::sqrt(acc);
}

EmbeddingConstants estimate_constants(const SpatialDiscretization& disc) {
  EmbeddingConstants c;

  // inverse iteration on -D2 (SPD) for its smallest eigenvalue
  Eigen::SparseMatrix<double> A = -disc.D2;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
  if (llt.info() != Eigen::Success) throw EigSolveFailure("factorization of -D2 failed");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(disc.N);
  v.normalize();
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = llt.solve(v);
    w.normalize();
    const double next = w.dot(A * w);
    if (it > 0 && std::abs(next - lambda) <= 1e-13 * std::abs(next)) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
    v = w;
  }
  if (!converged) throw EigSolveFailure("inverse iteration did not converge in 10^4 steps");
  if (lambda <= 0.0) throw EigSolveFailure("nonpositive smallest eigenvalue of -D2");
  c.M_P = 1.0 / lambda;

  // probe basis for the sup-norm embedding: low sine modes plus a skewed bump
  double best = 0.0;
  for (int mode = 1; mode <= 6; ++mode) {
    const Eigen::VectorXd p =
        (disc.x.array() * (mode * M_PI / disc.L)).sin().matrix();
    const double h1 = norm_Hk(disc, p, 1);
    best = std::max(best, p.cwiseAbs().maxCoeff() * p.cwiseAbs().maxCoeff() / (h1 * h1));
  }
  {
    const Eigen::ArrayXd t = disc.x.array() / disc.L;
    const Eigen::VectorXd p = (t.pow(2) * (1.0 - t).pow(4)).matrix();
    const double h1 = norm_Hk(disc, p, 1);
    best = std::max(best, p.cwiseAbs().maxCoeff() * p.cwiseAbs().maxCoeff() / (h1 * h1));
  }
  c.M_S_probe = best;
  c.M_S = 1.0 + 1.0 / disc.L;  // v^2 <= ||v||^2/L + 2||v|| ||v'||, conservative
  return c;
}

}  // namespace kawahara
