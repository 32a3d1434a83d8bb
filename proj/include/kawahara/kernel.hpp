#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kawahara/errors.hpp"

namespace kawahara {

enum class KernelFamily { Exponential, Polynomial, StretchedExponential, Tabulated };

std::string to_string(KernelFamily f);

/// Memory kernel pair (f, g = -f'). The weight g drives the history norm;
/// xi is the nonincreasing rate function with g' <= -xi*g.
///
/// Families (g and xi):
///   Exponential:            g(s) = d1*exp(-q1*s),            xi = q1
///   Polynomial:             g(s) = d1*(1+s)^(-q1),           xi(s) = q1/(1+s)
///   StretchedExponential:   g(s) = d1*exp(-q1*(1+s)^p1),     xi(s) = q1*p1*(1+s)^(p1-1)
///   Tabulated:              monotone-cubic interpolant of sampled g, constant xi
class MemoryKernel {
 public:
  KernelFamily family = KernelFamily::Exponential;
  double d1 = 1.0;
  double q1 = 1.0;
  double p1 = 0.5;   // StretchedExponential only
  double g0 = 0.0;   // int_0^inf g(s) ds = f(0)
  double c0 = 1.0;   // constant of the kernel hypotheses: 0 <= -g' <= c0*g
  double xi0 = 1.0;  // xi(0)

  double g(double s) const;
  double g_prime(double s) const;
  double xi(double s) const;
  double xi_prime(double s) const;
  /// Cumulative rate integral int_0^t xi(tau) dtau (closed form per family).
  double xi_integral(double t) const;

  /// Smallest S with g(S) <= tol * g(0); used for certified tail truncation.
  double s_max(double tol = 1e-12) const;

  bool tabulated() const { return family == KernelFamily::Tabulated; }
  const Eigen::VectorXd& table_s() const { return tab_s_; }

 private:
  friend MemoryKernel make_kernel(KernelFamily, double, double, double, std::optional<double>);
  friend MemoryKernel make_tabulated_kernel(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                            std::optional<double>, std::optional<double>);
  // tabulated data: monotone cubic interpolant of g on tab_s_
  Eigen::VectorXd tab_s_, tab_g_, tab_slope_;
  double tab_eval(double s, bool derivative) const;
};

/// Build a family kernel. g0 uses the closed form when available, otherwise
/// adaptive panel quadrature to 1e-10 relative. c0 defaults to the smallest
/// valid value per family (sup -g'/g) and may be overridden.
MemoryKernel make_kernel(KernelFamily family, double d1, double q1, double p1 = 0.5,
                         std::optional<double> c0 = std::nullopt);

/// Kernel from sampled g values (s ascending, s[0] = 0), monotone cubic
/// interpolation in between. xi is a constant (default: inf of -g'/g over
/// the samples, clamped at 0).
MemoryKernel make_tabulated_kernel(const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                   std::optional<double> xi0 = std::nullopt,
                                   std::optional<double> c0 = std::nullopt);

inline double eval_g(const MemoryKernel& k, double s) { return k.g(s); }
inline double eval_xi(const MemoryKernel& k, double s) { return k.xi(s); }

struct HypothesisCheck {
  std::string name;
  bool pass = true;
  double witness_s = 0.0;  // a failing sample point, when !pass
  double margin = 0.0;     // worst signed slack (negative = violated)
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  double tightest_c0 = 0.0;  // max of -g'/g over the samples (observed, not the paper's constant)
  bool all_pass() const;
  const HypothesisCheck* find(const std::string& name) const;
  std::string summary() const;
};

/// Check the kernel hypotheses (f' < 0, 0 <= f'' <= -c0 f', f(0) > 0, g > 0,
/// 0 <= -g' <= c0 g, g' <= -xi g, xi' <= 0, finite g0) on n_samples points of
/// [0, s_max]. Failures are report entries with witness points, never throws.
ValidationReport validate_hypotheses(const MemoryKernel& kernel, double s_max, int n_samples);

/// Adaptive quadrature of int_0^inf fn(s) ds over geometric panels
/// [0,1],[1,2],[2,4],...; stops when a panel contributes < 1e-14 of the total.
double integrate_to_infinity(const std::function<double(double)>& fn, double rel_panel_tol = 1e-14);

}  // namespace kawahara
