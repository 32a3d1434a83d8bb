#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "kawahara/config.hpp"
#include "kawahara/diagnostics.hpp"
#include "kawahara/presets.hpp"

using namespace kawahara;

TEST_CASE("energy oracles") {
  const double L = 1.0;
  const SpatialDiscretization d = build_discretization(L, 512, 2);
  const MemoryKernel k = make_kernel(KernelFamily::Exponential, 1.0, 1.0);

  SimState zero;
  zero.u = Eigen::VectorXd::Zero(d.N);
  zero.hist = init_history([](double, double) { return 0.0; }, d, k, k.s_max(), 64);
  CHECK(energy(zero, d, k, 0) == 0.0);

  SimState s;
  s.u.resize(d.N);
  for (int i = 0; i < d.N; ++i) s.u[i] = std::sin(M_PI * d.x[i] / L);
  s.hist = zero.hist;
  CHECK(energy(s, d, k, 0) == doctest::Approx(0.25).epsilon(1e-4));

  // additivity of the quadratic form
  SimState mixed = s;
  mixed.hist = init_history([&](double x, double) { return std::sin(M_PI * x / L); }, d, k,
                            k.s_max(), 128);
  SimState eta_only = zero;
  eta_only.hist = mixed.hist;
  CHECK(energy(mixed, d, k, 0) ==
        doctest::Approx(energy(s, d, k, 0) + energy(eta_only, d, k, 0)).epsilon(1e-12));
}

TEST_CASE("identity residual on synthetic series") {
  std::vector<EnergyRecord> series;
  // E(t) declining exactly at the reported dissipation: zero residual
  const double dt = 0.01;
  double E = 1.0;
  for (int n = 0; n <= 10; ++n) {
    EnergyRecord r;
    r.t = n * dt;
    r.E = E;
    r.boundary_diss = -2.0;
    r.memory_diss = -1.0;
    r.nonlinear_leak = 0.0;
    series.push_back(r);
    E += dt * (-3.0);
  }
  const ResidualReport rep = identity_residual(series);
  CHECK(rep.max_abs < 1e-12);
  CHECK_THROWS_AS(identity_residual({series[0], series[1]}), SeriesTooShort);
}

TEST_CASE("Lyapunov constants chain and equivalence bounds") {
  SimConfig c = make_preset("expo").config;
  const SpatialDiscretization d = build_discretization(c.L, c.N, 2);
  const EmbeddingConstants k = estimate_constants(d);

  Eigen::VectorXd u0(d.N);
  for (int i = 0; i < d.N; ++i) u0[i] = c.u0(d.x[i]);
  const double E0 = 0.5 * d.h * u0.squaredNorm();
  const LyapunovConstants lc = lyapunov_constants(c, k, E0, x_moment(d, u0));
  CHECK(lc.D > 0.0);
  CHECK(lc.eps > 0.0);
  CHECK(lc.C1 == doctest::Approx(1.0 / lc.D));
  CHECK(lc.C2 == doctest::Approx(2.0 * lc.C_eps / lc.D));
  CHECK(lc.mu == doctest::Approx(2.0 * (lc.C2 + 1.0 / (k.M_P * k.M_P))));
  CHECK(lc.lambda0 ==
        doctest::Approx(2.0 / (k.M_P * k.M_P * (lc.mu + 2.0 * c.L * lc.C1 * c.kernel.xi(0)))));
  CHECK(lc.c1 >= 2.0);
  CHECK(lc.c_tilde > 0.0);

  // equivalence mu*E <= F <= (mu + 2 L C1 xi(0)) E on state data
  SimState st;
  st.u = u0;
  st.t = 0.0;
  const double F = lyapunov(st, d, c, lc, E0);
  CHECK(F >= lc.mu * E0 * (1 - 1e-12));
  CHECK(F <= (lc.mu + 2.0 * c.L * lc.C1 * c.kernel.xi(0)) * E0 * (1 + 1e-12));

  // huge data: the construction must refuse
  CHECK_THROWS_AS(lyapunov_constants(c, k, 1e6, 1.0), NonpositiveD);
}

TEST_CASE("h correction term") {
  const SpatialDiscretization d = build_discretization(1.0, 64, 2);
  auto zero_hist = [](double, double) { return 0.0; };
  CHECK(h_correction(0.0, 5.0, zero_hist, d, 0) == 0.0);
  CHECK(h_correction(1.0, 2.0, zero_hist, d, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(h_correction(3.0, 2.0, zero_hist, d, 0), DomainError);

  // constant history sin(pi x): tau-integral over [0, t-s] = (t-s) sin(pi x)
  auto hist = [](double x, double) { return std::sin(M_PI * x); };
  const double sin_norm = std::sqrt(0.5);
  CHECK(h_correction(1.0, 2.0, hist, d, 0) ==
        doctest::Approx(1.0 + 1.0 + sin_norm).epsilon(1e-4));
  CHECK(h_correction(1.0, 2.0, hist, d, 0, true) ==
        doctest::Approx(1.0 + 1.0 + 0.5).epsilon(1e-4));
}

TEST_CASE("decay fit recovers synthetic parameters") {
  const MemoryKernel ke = make_kernel(KernelFamily::Exponential, 1.0, 1.0);
  std::vector<EnergyRecord> series;
  for (int n = 0; n <= 1000; ++n) {
    EnergyRecord r;
    r.t = 0.01 * n;
    r.E = 3.0 * std::exp(-0.7 * r.t);
    series.push_back(r);
  }
  const DecayFit f = fit_decay(series, DecayModel::Exponential, ke, 0.0, 10.0);
  CHECK(f.rate == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.envelope_violations == 0);

  const MemoryKernel kp = make_kernel(KernelFamily::Polynomial, 1.0, 1.5);
  std::vector<EnergyRecord> poly;
  for (int n = 0; n <= 1000; ++n) {
    EnergyRecord r;
    r.t = 0.05 * n;
    r.E = std::pow(1.0 + r.t, -2.0);
    poly.push_back(r);
  }
  // xi = q1/(1+s) with q1 = 1.5: int xi = 1.5 log(1+t); slope vs int xi = 2/1.5
  const DecayFit fp = fit_decay(poly, DecayModel::GeneralizedXi, kp, 0.0, 50.0);
  CHECK(fp.rate == doctest::Approx(2.0 / 1.5).epsilon(1e-6));
  CHECK(fp.r_squared == doctest::Approx(1.0));
}

TEST_CASE("all-zero series yields the sentinel fit") {
  const MemoryKernel ke = make_kernel(KernelFamily::Exponential, 1.0, 1.0);
  std::vector<EnergyRecord> series(20);
  for (int n = 0; n < 20; ++n) series[n].t = 0.1 * n;
  const DecayFit f = fit_decay(series, DecayModel::Exponential, ke, 0.0, 2.0);
  CHECK(f.all_zero);
  CHECK(std::isinf(f.rate));
}

TEST_CASE("CSV round trip is bit exact") {
  std::vector<EnergyRecord> series;
  for (int n = 0; n < 37; ++n) {
    EnergyRecord r;
    r.t = n * 0.1 + 1e-17;
    r.E = std::exp(-0.31 * n) / 3.0;
    r.F = r.E * M_PI;
    r.u_norm = std::sqrt(r.E);
    r.eta_norm_Lg = r.E / 7.0;
    r.boundary_diss = -r.E * 1.7e-5;
    r.memory_diss = -r.E / 13.0;
    r.nonlinear_leak = 1e-300 * n;
    r.uxx0 = std::cos(double(n));
    series.push_back(r);
  }
  const std::string path =
      (std::filesystem::temp_directory_path() / "kawahara_csv_test.csv").string();
  write_csv(path, series);
  const auto back = read_csv(path);
  REQUIRE(back.size() == series.size());
  for (size_t i = 0; i < series.size(); ++i) {
    CHECK(back[i].t == series[i].t);
    CHECK(back[i].E == series[i].E);
    CHECK(back[i].F == series[i].F);
    CHECK(back[i].u_norm == series[i].u_norm);
    CHECK(back[i].eta_norm_Lg == series[i].eta_norm_Lg);
    CHECK(back[i].boundary_diss == series[i].boundary_diss);
    CHECK(back[i].memory_diss == series[i].memory_diss);
    CHECK(back[i].nonlinear_leak == series[i].nonlinear_leak);
    CHECK(back[i].uxx0 == series[i].uxx0);
  }
  std::remove(path.c_str());
}

TEST_CASE("per-step Lyapunov contraction on a constant-xi run") {
  SimConfig c = make_preset("expo").config;
  c.T = 2.0;
  const RunResult r = run(c);
  REQUIRE(!r.failed);
  const SpatialDiscretization d = build_discretization(c.L, c.N, 2);
  const EmbeddingConstants k = estimate_constants(d);
  Eigen::VectorXd u0(d.N);
  for (int i = 0; i < d.N; ++i) u0[i] = c.u0(d.x[i]);
  const LyapunovConstants lc =
      lyapunov_constants(c, k, r.series.front().E, x_moment(d, u0));
  const double xi0 = c.kernel.xi(0.0);
  for (size_t n = 1; n < r.series.size(); ++n) {
    const double dtn = r.series[n].t - r.series[n - 1].t;
    const double factor = std::exp(-lc.lambda0 * xi0 * dtn);
    CHECK(r.series[n].F <= r.series[n - 1].F * factor * (1.0 + 1e-4));
  }
}
