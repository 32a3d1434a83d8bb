#include "kawahara/history.hpp"

#include <algorithm>
#include <cmath>

namespace kawahara {

namespace {

// 7-point Gauss-Legendre on [-1,1], for the tau-integrals of init_history
constexpr int kGN = 7;
constexpr double kGX[kGN] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                             0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double kGW[kGN] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                             0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                             0.1294849661688697};

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& s) {
  const int n = static_cast<int>(s.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (int j = 0; j + 1 < n; ++j) {
    const double half = 0.5 * (s[j + 1] - s[j]);
    w[j] += half;
    w[j + 1] += half;
  }
  return w;
}

// ||D^k v||^2 with the grid quadrature
double dk_sq(const SpatialDiscretization& disc, const Eigen::VectorXd& v, int k) {
  if (k == 0) return disc.h * v.squaredNorm();
  const Eigen::VectorXd dv = (k == 1) ? Eigen::VectorXd(disc.D1 * v)
                                      : Eigen::VectorXd(disc.D2 * v);
  return disc.h * dv.squaredNorm();
}

Eigen::VectorXd apply_dk(const SpatialDiscretization& disc, const Eigen::VectorXd& v, int k) {
  if (k == 0) return v;
  if (k == 1) return disc.D1 * v;
  return disc.D2 * v;
}

}  // namespace

Eigen::VectorXd geometric_s_grid(double S_max, int M, double ratio) {
  Eigen::VectorXd s(M + 1);
  const double denom = std::pow(ratio, M) - 1.0;
  for (int j = 0; j <= M; ++j) s[j] = S_max * (std::pow(ratio, j) - 1.0) / denom;
  s[0] = 0.0;
  s[M] = S_max;
  return s;
}

HistoryField init_history(const std::function<double(double, double)>& u0_history,
                          const SpatialDiscretization& disc, const MemoryKernel& kernel,
                          double S_max, int M_s, HistoryMode mode, int k, double ratio) {
  if (M_s < 16) throw ParameterOutOfRange("need at least 16 history nodes");
  if (kernel.g(S_max) > 1e-12 * kernel.g(0.0) * (1.0 + 1e-9))
    throw TailTooFat("g(S_max) exceeds 1e-12*g(0); raise S_max");
  if (mode == HistoryMode::ExponentialODE && kernel.family != KernelFamily::Exponential)
    throw ModeMismatch("exponential-ODE history requires an exponential kernel");

  const int N = disc.N;
  // The ExponentialODE reduction integrates the same grid field, just on a
  // finer internal s-grid since it is a one-off cost.
  const int M = (mode == HistoryMode::ExponentialODE) ? std::max(4 * M_s, 512) : M_s;
  const double r = (mode == HistoryMode::ExponentialODE) ? std::pow(ratio, M_s / double(M)) : ratio;

  HistoryField h;
  h.k = k;
  h.s_nodes = geometric_s_grid(S_max, M, r);
  const Eigen::VectorXd tw = trapezoid_weights(h.s_nodes);
  h.w.resize(M + 1);
  h.w_gp.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    h.w[j] = kernel.g(h.s_nodes[j]) * tw[j];
    h.w_gp[j] = kernel.g_prime(h.s_nodes[j]) * tw[j];
  }

  h.eta = Eigen::MatrixXd::Zero(M + 1, N);
  for (int i = 0; i < N; ++i) {
    const double xi = disc.x[i];
    double acc = 0.0;
    for (int j = 1; j <= M; ++j) {
      const double a = h.s_nodes[j - 1], b = h.s_nodes[j];
      const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
      double p = 0.0;
      for (int q = 0; q < kGN; ++q) p += kGW[q] * u0_history(xi, c + hw * kGX[q]);
      acc += hw * p;
      h.eta(j, i) = acc;
    }
  }

  if (mode == HistoryMode::Grid) {
    h.mode = HistoryMode::Grid;
    return h;
  }

  HistoryField e;
  e.mode = HistoryMode::ExponentialODE;
  e.k = k;
  e.q1 = kernel.q1;
  e.g0 = kernel.g0;
  e.m = h.eta.transpose() * h.w;
  e.n2 = 0.0;
  for (int j = 0; j <= M; ++j) e.n2 += h.w[j] * dk_sq(disc, h.eta.row(j).transpose(), k);
  return e;
}

void advance_history(HistoryField& hist, const SpatialDiscretization& disc,
                     const Eigen::VectorXd& u_old, const Eigen::VectorXd& u_new, double dt) {
  if (dt <= 0.0) throw ParameterOutOfRange("history step needs dt > 0");
  if (u_new.size() != disc.N || u_old.size() != disc.N)
    throw DimensionMismatch("state vector does not match the grid");

  if (hist.mode == HistoryMode::ExponentialODE) {
    const double z = hist.q1 * dt;
    const double e = std::exp(-z);
    // trapezoid-in-u exponential integrator: exact for u linear over the step
    const double bh = (1.0 / hist.q1) * (1.0 - (1.0 - e) / z);
    const double ah = (1.0 - e) / hist.q1 - bh;
    const Eigen::VectorXd m_new = e * hist.m + (hist.g0 * ah) * u_old + (hist.g0 * bh) * u_new;
    // d(n2)/dt = 2 <D^k m, D^k u> - q1*n2, same integrator with unit gain
    const Eigen::VectorXd dm0 = apply_dk(disc, hist.m, hist.k);
    const Eigen::VectorXd du0 = apply_dk(disc, u_old, hist.k);
    const Eigen::VectorXd dm1 = apply_dk(disc, m_new, hist.k);
    const Eigen::VectorXd du1 = apply_dk(disc, u_new, hist.k);
    const double p0 = 2.0 * disc.h * dm0.dot(du0);
    const double p1 = 2.0 * disc.h * dm1.dot(du1);
    hist.n2 = e * hist.n2 + ah * p0 + bh * p1;
    hist.m = m_new;
    return;
  }

  const auto& s = hist.s_nodes;
  const int M = static_cast<int>(s.size()) - 1;
  Eigen::MatrixXd fresh(hist.eta.rows(), hist.eta.cols());
  const Eigen::VectorXd um = 0.5 * (u_old + u_new);
  fresh.row(0).setZero();
  for (int j = 1; j <= M; ++j) {
    const double sj = s[j];
    if (sj <= dt) {
      fresh.row(j) = sj * u_new.transpose();
    } else {
      const double q = sj - dt;
      int lo = static_cast<int>(std::upper_bound(s.data(), s.data() + M + 1, q) - s.data()) - 1;
      lo = std::clamp(lo, 0, M - 1);
      const double th = (q - s[lo]) / (s[lo + 1] - s[lo]);
      fresh.row(j) =
          (1.0 - th) * hist.eta.row(lo) + th * hist.eta.row(lo + 1) + dt * um.transpose();
    }
  }
  hist.eta.swap(fresh);
}

Eigen::VectorXd memory_integral(const HistoryField& hist, const SpatialDiscretization& disc,
                                int k) {
  if (k < 0 || k > 2) throw ParameterOutOfRange("memory order k must be 0, 1 or 2");
  Eigen::VectorXd v = (hist.mode == HistoryMode::ExponentialODE)
                          ? hist.m
                          : Eigen::VectorXd(hist.eta.transpose() * hist.w);
  if (v.size() != disc.N) throw DimensionMismatch("history does not match the grid");
  if (k >= 1) v = disc.D2 * v;
  if (k == 2) v = disc.D2 * v;
  if (k == 1) v = -v;  // (-1)^k
  return v;
}

double memory_norm(const HistoryField& hist, const SpatialDiscretization& disc, int k) {
  if (hist.mode == HistoryMode::ExponentialODE) return std::sqrt(std::max(0.0, hist.n2));
  double acc = 0.0;
  for (int j = 0; j < hist.eta.rows(); ++j)
    acc += hist.w[j] * dk_sq(disc, hist.eta.row(j).transpose(), k);
  return std::sqrt(std::max(0.0, acc));
}

double memory_dissipation(const HistoryField& hist, const SpatialDiscretization& disc, int k,
                          const MemoryKernel& kernel) {
  if (hist.mode == HistoryMode::ExponentialODE) return -0.5 * kernel.q1 * hist.n2;
  double acc = 0.0;
  for (int j = 0; j < hist.eta.rows(); ++j)
    acc += hist.w_gp[j] * dk_sq(disc, hist.eta.row(j).transpose(), k);
  return 0.5 * acc;
}

}  // namespace kawahara
