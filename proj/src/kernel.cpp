#include "kawahara/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kawahara {

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1,1].
constexpr int kGaussN = 15;
constexpr double kGaussX[kGaussN] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGaussW[kGaussN] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss_panel(const std::function<double(double)>& fn, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < kGaussN; ++i) acc += kGaussW[i] * fn(c + h * kGaussX[i]);
  return h * acc;
}

// Fritsch-Carlson monotone cubic slopes.
Eigen::VectorXd pchip_slopes(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd d(n);
  if (n == 2) {
    d.setConstant((y[1] - y[0]) / (x[1] - x[0]));
    return d;
  }
  Eigen::VectorXd h(n - 1), delta(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (int i = 1; i < n - 1; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0)
      s = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
      s = 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

}  // namespace

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::Polynomial: return "polynomial";
    case KernelFamily::StretchedExponential: return "stretched";
    case KernelFamily::Tabulated: return "tabulated";
  }
  return "?";
}

double integrate_to_infinity(const std::function<double(double)>& fn, double rel_panel_tol) {
  double total = gauss_panel(fn, 0.0, 1.0);
  double lo = 1.0;
  for (int j = 0; j < 64; ++j) {
    const double hi = 2.0 * lo;
    const double p = gauss_panel(fn, lo, hi);
    total += p;
    if (std::abs(p) < rel_panel_tol * std::abs(total) && j >= 2) break;
    lo = hi;
  }
  return total;
}

double MemoryKernel::tab_eval(double s, bool derivative) const {
  const auto& xs = tab_s_;
  const int n = static_cast<int>(xs.size());
  double sc = std::clamp(s, xs[0], xs[n - 1]);
  int lo = static_cast<int>(std::upper_bound(xs.data(), xs.data() + n, sc) - xs.data()) - 1;
  lo = std::clamp(lo, 0, n - 2);
  const double h = xs[lo + 1] - xs[lo];
  const double t = (sc - xs[lo]) / h;
  const double y0 = tab_g_[lo], y1 = tab_g_[lo + 1];
  const double d0 = tab_slope_[lo], d1 = tab_slope_[lo + 1];
  // Hermite basis
  const double t2 = t * t, t3 = t2 * t;
  if (!derivative) {
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
  }
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
          (3 * t2 - 2 * t) * h * d1) / h;
}

double MemoryKernel::g(double s) const {
  switch (family) {
    case KernelFamily::Exponential: return d1 * std::exp(-q1 * s);
    case KernelFamily::Polynomial: return d1 * std::pow(1.0 + s, -q1);
    case KernelFamily::StretchedExponential: return d1 * std::exp(-q1 * std::pow(1.0 + s, p1));
    case KernelFamily::Tabulated: return tab_eval(s, false);
  }
  return 0.0;
}

double MemoryKernel::g_prime(double s) const {
  switch (family) {
    case KernelFamily::Exponential: return -q1 * g(s);
    case KernelFamily::Polynomial: return -q1 * d1 * std::pow(1.0 + s, -q1 - 1.0);
    case KernelFamily::StretchedExponential:
      return -q1 * p1 * std::pow(1.0 + s, p1 - 1.0) * g(s);
    case KernelFamily::Tabulated: return tab_eval(s, true);
  }
  return 0.0;
}

double MemoryKernel::xi(double s) const {
  switch (family) {
    case KernelFamily::Exponential: return q1;
    case KernelFamily::Polynomial: return q1 / (1.0 + s);
    case KernelFamily::StretchedExponential: return q1 * p1 * std::pow(1.0 + s, p1 - 1.0);
    case KernelFamily::Tabulated: return xi0;
  }
  return 0.0;
}

double MemoryKernel::xi_prime(double s) const {
  switch (family) {
    case KernelFamily::Exponential: return 0.0;
    case KernelFamily::Polynomial: return -q1 / ((1.0 + s) * (1.0 + s));
    case KernelFamily::StretchedExponential:
      return q1 * p1 * (p1 - 1.0) * std::pow(1.0 + s, p1 - 2.0);
    case KernelFamily::Tabulated: return 0.0;
  }
  return 0.0;
}

double MemoryKernel::xi_integral(double t) const {
  switch (family) {
    case KernelFamily::Exponential: return q1 * t;
    case KernelFamily::Polynomial: return q1 * std::log1p(t);
    case KernelFamily::StretchedExponential: return q1 * (std::pow(1.0 + t, p1) - 1.0);
    case KernelFamily::Tabulated: return xi0 * t;
  }
  return 0.0;
}

double MemoryKernel::s_max(double tol) const {
  switch (family) {
    case KernelFamily::Exponential: return -std::log(tol) / q1;
    case KernelFamily::Polynomial: return std::pow(tol, -1.0 / q1) - 1.0;
    case KernelFamily::StretchedExponential:
      return std::pow(1.0 - std::log(tol) / q1, 1.0 / p1) - 1.0;
    case KernelFamily::Tabulated: return tab_s_[tab_s_.size() - 1];
  }
  return 0.0;
}

MemoryKernel make_kernel(KernelFamily family, double d1, double q1, double p1,
                         std::optional<double> c0) {
  if (d1 <= 0.0) throw ParameterOutOfRange("kernel amplitude d1 must be positive");
  MemoryKernel k;
  k.family = family;
  k.d1 = d1;
  k.q1 = q1;
  k.p1 = p1;
  switch (family) {
    case KernelFamily::Exponential:
      if (q1 <= 0.0) throw ParameterOutOfRange("exponential kernel needs q1 > 0");
      k.g0 = d1 / q1;
      k.xi0 = q1;
      k.c0 = c0.value_or(q1);
      break;
    case KernelFamily::Polynomial:
      if (q1 <= 1.0)
        throw ParameterOutOfRange("polynomial kernel needs q1 > 1 (g0 diverges otherwise)");
      k.g0 = d1 / (q1 - 1.0);
      k.xi0 = q1;
      k.c0 = c0.value_or(q1);  // sup -g'/g = q1/(1+s) at s=0
      break;
    case KernelFamily::StretchedExponential:
      if (q1 <= 0.0 || p1 <= 0.0 || p1 >= 1.0)
        throw ParameterOutOfRange("stretched kernel needs q1 > 0 and p1 in (0,1)");
      k.g0 = integrate_to_infinity([&](double s) { return k.g(s); });
      k.xi0 = q1 * p1;
      k.c0 = c0.value_or(q1 * p1);  // -g'/g = q1 p1 (1+s)^{p1-1}, sup at s=0
      break;
    case KernelFamily::Tabulated:
      throw ParameterOutOfRange("use make_tabulated_kernel for tabulated kernels");
  }
  return k;
}

MemoryKernel make_tabulated_kernel(const Eigen::VectorXd& s, const Eigen::VectorXd& g,
                                   std::optional<double> xi0, std::optional<double> c0) {
  if (s.size() != g.size() || s.size() < 4)
    throw ParameterOutOfRange("tabulated kernel needs >= 4 matching samples");
  if (s[0] != 0.0) throw ParameterOutOfRange("tabulated kernel samples must start at s = 0");
  for (int i = 1; i < s.size(); ++i)
    if (s[i] <= s[i - 1]) throw ParameterOutOfRange("tabulated s-nodes must be increasing");
  MemoryKernel k;
  k.family = KernelFamily::Tabulated;
  k.tab_s_ = s;
  k.tab_g_ = g;
  k.tab_slope_ = pchip_slopes(s, g);
  // trapezoid over the table; tail beyond the table is ignored (the finite-g0
  // validation entry flags tables whose octave contributions do not settle)
  double acc = 0.0;
  for (int i = 0; i + 1 < s.size(); ++i) acc += 0.5 * (g[i] + g[i + 1]) * (s[i + 1] - s[i]);
  k.g0 = acc;
  k.d1 = std::max(g[0], std::numeric_limits<double>::min());
  double inf_rate = std::numeric_limits<double>::infinity();
  double sup_rate = 0.0;
  for (int i = 0; i < s.size(); ++i) {
    const double gi = k.g(s[i]);
    if (gi > 0.0) {
      const double r = -k.g_prime(s[i]) / gi;
      inf_rate = std::min(inf_rate, r);
      sup_rate = std::max(sup_rate, r);
    }
  }
  k.xi0 = xi0.value_or(std::max(0.0, std::isfinite(inf_rate) ? inf_rate : 0.0));
  k.c0 = c0.value_or(sup_rate > 0.0 ? sup_rate : 1.0);
  return k;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name;
    if (!c.pass) os << "  (witness s = " << c.witness_s << ", margin " << c.margin << ")";
    os << "\n";
  }
  os << "tightest observed c0: " << tightest_c0 << "\n";
  return os.str();
}

ValidationReport validate_hypotheses(const MemoryKernel& k, double s_max, int n_samples) {
  if (s_max <= 0.0) throw ParameterOutOfRange("validate_hypotheses needs s_max > 0");
  if (n_samples < 16) throw ParameterOutOfRange("validate_hypotheses needs n_samples >= 16");

  ValidationReport rep;
  rep.checks.reserve(8);  // references below must stay stable
  auto check = [&rep](const std::string& name) -> HypothesisCheck& {
    rep.checks.push_back({name, true, 0.0, std::numeric_limits<double>::infinity()});
    return rep.checks.back();
  };
  auto fail_if = [](HypothesisCheck& c, double slack, double s) {
    // slack >= 0 means the hypothesis holds at s
    if (slack < c.margin) {
      c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.witness_s = s;
      }
    }
  };

  auto& c_fp = check("f_prime_negative");       // f' = -g < 0
  auto& c_f2 = check("f_second_deriv_bounds");  // 0 <= f'' = -g' <= -c0 f' = c0 g
  auto& c_f0 = check("f0_positive");            // f(0) = g0 > 0
  auto& c_gp = check("g_positive");
  auto& c_gb = check("g_prime_bounds");  // 0 <= -g' <= c0 g
  auto& c_gx = check("g_prime_le_minus_xi_g");
  auto& c_xi = check("xi_nonincreasing");
  auto& c_g0 = check("g0_finite");

  const double tol = 1e-12 * std::max(1.0, std::abs(k.g(0.0)));
  double tightest = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = s_max * static_cast<double>(i) / (n_samples - 1);
    const double g = k.g(s), gp = k.g_prime(s), xi = k.xi(s), xip = k.xi_prime(s);
    fail_if(c_fp, g - tol * 0.0, s);  // f' < 0 <=> g > 0 (strict, zero fails)
    if (g <= 0.0 && c_fp.pass) { c_fp.pass = false; c_fp.witness_s = s; c_fp.margin = g; }
    fail_if(c_gp, g, s);
    if (g <= 0.0 && c_gp.pass) { c_gp.pass = false; c_gp.witness_s = s; }
    fail_if(c_f2, std::min(-gp + tol, k.c0 * g + gp) + tol, s);
    fail_if(c_gb, std::min(-gp + tol, k.c0 * g + gp) + tol, s);
    fail_if(c_gx, -(gp + xi * g) + tol, s);
    fail_if(c_xi, -xip + tol, s);
    if (g > 0.0) tightest = std::max(tightest, -gp / g);
  }
  fail_if(c_f0, k.g0, 0.0);
  if (k.g0 <= 0.0) { c_f0.pass = false; c_f0.witness_s = 0.0; }

  // finite-g0: octave contributions int_{2^j}^{2^{j+1}} g must settle
  {
    auto quad = [&](double a, double b) {
      const int n = 64;
      double acc = 0.0;
      const double h = (b - a) / n;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * k.g(a + i * h);
      }
      return acc * h;
    };
    double total = quad(0.0, 1.0);
    double last = total;
    double lo = 1.0;
    const double cap = k.tabulated() ? k.table_s()[k.table_s().size() - 1] : k.s_max(1e-12);
    while (lo < cap) {
      const double hi = std::min(2.0 * lo, cap);
      last = quad(lo, hi);
      total += last;
      lo = hi;
    }
    const double slack = 0.05 * total - last;
    fail_if(c_g0, slack, lo);
    if (slack < 0.0 && c_g0.pass) { c_g0.pass = false; c_g0.witness_s = lo; }
  }

  rep.tightest_c0 = tightest;
  return rep;
}

}  // namespace kawahara
