#pragma once

#include <string>
#include <vector>

#include "kawahara/solver.hpp"

namespace kawahara {

/// E = (||u||^2 + ||eta||_{L_g}^2)/2.
double energy(const SimState& state, const SpatialDiscretization& disc,
              const MemoryKernel& kernel, int k);

struct ResidualReport {
  std::vector<double> residuals;  // one per series interval
  double max_abs = 0.0;
  double l1 = 0.0;  // dt-weighted
};

/// Residual of the dissipation identity: (E_{n+1}-E_n)/dt minus the trapezoid
/// of boundary + memory dissipation + nonlinear leak over the interval.
ResidualReport identity_residual(const std::vector<EnergyRecord>& series);

/// Constants of the Lyapunov construction, chained from the energy estimates:
/// eps = D0/8 with D0 the margin at eps=0, D the damped margin, C1 = 1/D,
/// C2 = 2*C_eps/D, mu = 2(C2 + 1/M_P^2), lambda0 the contraction rate, and the
/// envelope constants C3, c1, c_tilde.
struct LyapunovConstants {
  double E0 = 0.0;
  double eps = 0.0;
  double D = 0.0;
  double C_eps = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double mu = 0.0;
  double lambda0 = 0.0;
  double C3 = 0.0;
  double c1 = 0.0;
  double c_tilde = 0.0;  // max{F(0), c1*mu/2}/mu
};

/// Throws NonpositiveD when the small-data condition fails and the
/// construction is undefined. x_moment0 = int x u0^2 dx.
LyapunovConstants lyapunov_constants(const SimConfig& cfg, const EmbeddingConstants& constants,
                                     double E0, double x_moment0);

/// F = mu*E + C1*xi(t)*int x u^2 dx.
double lyapunov(const SimState& state, const SpatialDiscretization& disc, const SimConfig& cfg,
                const LyapunovConstants& lc, double E);

/// x-weighted moment int_0^L x u^2 dx (composite trapezoid).
double x_moment(const SpatialDiscretization& disc, const Eigen::VectorXd& u);

/// h(t,s) = t^2 + t + ||int_0^{t-s} D^k u0_history(.,tau) dtau||, with the
/// norm squared when squared_norm is set (the two published variants).
double h_correction(double t, double s, const std::function<double(double, double)>& u0_history,
                    const SpatialDiscretization& disc, int k, bool squared_norm = false);

enum class DecayModel { Exponential, GeneralizedXi };

struct DecayFit {
  DecayModel model = DecayModel::Exponential;
  double rate = 0.0;       // c
  double amplitude = 0.0;  // c_tilde
  double r_squared = 0.0;
  double t0 = 0.0, t1 = 0.0;
  int envelope_violations = 0;  // samples above the fitted envelope by > 5%
  bool all_zero = false;        // series identically 0; rate is +inf sentinel
};

/// Least squares of log E against t (Exponential) or against the cumulative
/// xi-integral (GeneralizedXi). Fits only samples with E > 0 in the window.
DecayFit fit_decay(const std::vector<EnergyRecord>& series, DecayModel model,
                   const MemoryKernel& kernel, double t0, double t1);

/// CSV with the fixed header t,E,F,u_norm,eta_norm_Lg,boundary_diss,
/// memory_diss,nonlinear_leak,uxx0; %.17g fields for bit-stable round trips.
void write_csv(const std::string& path, const std::vector<EnergyRecord>& series);
std::vector<EnergyRecord> read_csv(const std::string& path);
extern const char* const kCsvHeader;

}  // namespace kawahara
