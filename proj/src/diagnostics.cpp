#include "kawahara/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace kawahara {

const char* const kCsvHeader =
    "t,E,F,u_norm,eta_norm_Lg,boundary_diss,memory_diss,nonlinear_leak,uxx0";

double energy(const SimState& state, const SpatialDiscretization& disc,
              const MemoryKernel& /*kernel*/, int k) {
  const double un = norm_L2(disc, state.u);
  const double en = memory_norm(state.hist, disc, k);
  return 0.5 * (un * un + en * en);
}

ResidualReport identity_residual(const std::vector<EnergyRecord>& series) {
  if (series.size() < 3) throw SeriesTooShort("identity residual needs >= 3 records");
  ResidualReport rep;
  rep.residuals.reserve(series.size() - 1);
  for (size_t n = 0; n + 1 < series.size(); ++n) {
    const auto& a = series[n];
    const auto& b = series[n + 1];
    const double dt = b.t - a.t;
    const double rhs = 0.5 * (a.boundary_diss + b.boundary_diss) +
                       0.5 * (a.memory_diss + b.memory_diss) +
                       0.5 * (a.nonlinear_leak + b.nonlinear_leak);
    const double r = (b.E - a.E) / dt - rhs;
    rep.residuals.push_back(r);
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
    rep.l1 += std::abs(r) * dt;
  }
  return rep;
}

LyapunovConstants lyapunov_constants(const SimConfig& cfg, const EmbeddingConstants& constants,
                                     double E0, double x_moment0) {
  const double MP = constants.M_P, MS = constants.M_S, L = cfg.L;
  const double drag = (2.0 / 3.0) * MS * std::sqrt(L) * MP * (MP + 1.0);
  const double D0 = 5.0 * cfg.a0 - drag * std::sqrt(2.0) * std::sqrt(E0) - cfg.a1 * MP * MP;
  if (D0 <= 0.0)
    throw NonpositiveD("small-data margin nonpositive; Lyapunov constants undefined");
  LyapunovConstants lc;
  lc.E0 = E0;
  lc.eps = D0 / 8.0;
  lc.D = 5.0 * cfg.a0 - drag * std::sqrt(E0) - cfg.a1 * MP * MP - 2.0 * lc.eps;
  if (lc.D <= 0.0)
    throw NonpositiveD("damped margin D nonpositive; Lyapunov constants undefined");
  const double g0 = cfg.kernel.g0;
  switch (cfg.k) {
    case 0: lc.C_eps = L * L * MP * MP * g0 / (4.0 * lc.eps); break;
    case 1: lc.C_eps = g0 * (MP + MP * MP) / (2.0 * lc.eps); break;
    case 2: lc.C_eps = 2.0 * g0 * (MP + L * L) / lc.eps; break;
    default: throw ParameterOutOfRange("memory order k must be 0, 1 or 2");
  }
  lc.C1 = 1.0 / lc.D;
  lc.C2 = 2.0 * lc.C_eps / lc.D;
  lc.mu = 2.0 * (lc.C2 + 1.0 / (MP * MP));
  const double xi0 = cfg.kernel.xi(0.0);
  lc.lambda0 = 2.0 / (MP * MP * (lc.mu + 2.0 * L * lc.C1 * xi0));
  lc.C3 = std::max(lc.C1 * x_moment0, 2.0 * lc.C2 * E0);
  lc.c1 = 2.0 * std::max(1.0, std::pow(MP, 2.0 - cfg.k) * lc.C3);
  const double F0 = lc.mu * E0 + lc.C1 * xi0 * x_moment0;
  lc.c_tilde = std::max(F0, lc.c1 * lc.mu / 2.0) / lc.mu;
  return lc;
}

double x_moment(const SpatialDiscretization& disc, const Eigen::VectorXd& u) {
  if (u.size() != disc.N) throw DimensionMismatch("vector length does not match the grid");
  return disc.h * disc.x.dot(u.cwiseProduct(u));
}

double lyapunov(const SimState& state, const SpatialDiscretization& disc, const SimConfig& cfg,
                const LyapunovConstants& lc, double E) {
  return lc.mu * E + lc.C1 * cfg.kernel.xi(state.t) * x_moment(disc, state.u);
}

double h_correction(double t, double s, const std::function<double(double, double)>& u0_history,
                    const SpatialDiscretization& disc, int k, bool squared_norm) {
  if (t > s) throw DomainError("h(t,s) requires t <= s");
  // w(x) = int_0^{t-s} u0_history(x,tau) dtau, signed over the negative range
  Eigen::VectorXd w = Eigen::VectorXd::Zero(disc.N);
  const double a = t - s;  // <= 0
  if (u0_history && a != 0.0) {
    const int panels = 64;
    const double dtau = -a / panels;
    for (int i = 0; i < disc.N; ++i) {
      double acc = 0.0;
      for (int p = 0; p < panels; ++p) {
        const double lo = p * dtau, hi = lo + dtau;  // integrating over [0, s-t]
        acc += 0.5 * (u0_history(disc.x[i], lo) + u0_history(disc.x[i], hi)) * dtau;
      }
      w[i] = -acc;  // int_0^{a} = -int_0^{-a}
    }
  }
  Eigen::VectorXd dw = w;
  if (k == 1) dw = disc.D1 * w;
  if (k == 2) dw = disc.D2 * w;
  const double nrm = std::sqrt(disc.h * dw.squaredNorm());
  return t * t + t + (squared_norm ? nrm * nrm : nrm);
}

DecayFit fit_decay(const std::vector<EnergyRecord>& series, DecayModel model,
                   const MemoryKernel& kernel, double t0, double t1) {
  DecayFit fit;
  fit.model = model;
  fit.t0 = t0;
  fit.t1 = t1;

  std::vector<double> X, Y, T;
  for (const auto& r : series) {
    if (r.t < t0 || r.t > t1 || r.E <= 0.0) continue;
    T.push_back(r.t);
    X.push_back(model == DecayModel::Exponential ? r.t : kernel.xi_integral(r.t));
    Y.push_back(std::log(r.E));
  }
  if (X.size() < 3) {
    bool any = false;
    for (const auto& r : series) any = any || r.E > 0.0;
    if (!any) {
      fit.all_zero = true;
      fit.rate = std::numeric_limits<double>::infinity();
      fit.r_squared = 1.0;
      return fit;
    }
    throw SeriesTooShort("decay fit needs >= 3 positive samples in the window");
  }

  const int n = static_cast<int>(X.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += X[i];
    sy += Y[i];
    sxx += X[i] * X[i];
    sxy += X[i] * Y[i];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double icpt = (sy - slope * sx) / n;
  fit.rate = -slope;
  fit.amplitude = std::exp(icpt);
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double p = slope * X[i] + icpt;
    ss_res += (Y[i] - p) * (Y[i] - p);
    ss_tot += (Y[i] - ybar) * (Y[i] - ybar);
  }
  fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;

  for (int i = 0; i < n; ++i) {
    const double envelope = fit.amplitude * std::exp(-fit.rate * X[i]);
    if (std::exp(Y[i]) > envelope * 1.05) ++fit.envelope_violations;
  }
  return fit;
}

void write_csv(const std::string& path, const std::vector<EnergyRecord>& series) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << kCsvHeader << "\n";
  char buf[512];
  for (const auto& r : series) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.E, r.F,
                  r.u_norm, r.eta_norm_Lg, r.boundary_diss, r.memory_diss, r.nonlinear_leak,
                  r.uxx0);
    out << buf;
  }
}

std::vector<EnergyRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 1);
  if (line != kCsvHeader) throw ParseError("unexpected CSV header", 1);
  std::vector<EnergyRecord> series;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    EnergyRecord r;
    double* fields[9] = {&r.t, &r.E, &r.F, &r.u_norm, &r.eta_norm_Lg, &r.boundary_diss,
                         &r.memory_diss, &r.nonlinear_leak, &r.uxx0};
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i < 9; ++i) {
      if (!std::getline(ss, cell, ',')) throw ParseError("short CSV row", line_no);
      *fields[i] = std::strtod(cell.c_str(), nullptr);
    }
    series.push_back(r);
  }
  return series;
}

}  // namespace kawahara
