#include "kawahara/solver.hpp"

#include <cmath>

#include "kawahara/diagnostics.hpp"

namespace kawahara {

Condition140 check_condition_140(const SimConfig& cfg, const EmbeddingConstants& constants,
                                 double u0_norm, double eta0_norm) {
  Condition140 c;
  c.U0_norm = std::sqrt(u0_norm * u0_norm + eta0_norm * eta0_norm);
  const double MP = constants.M_P, MS = constants.M_S;
  c.lhs = cfg.a1 * MP * MP +
          (2.0 / 3.0) * MP * (MP + 1.0) * std::sqrt(cfg.L) * MS * c.U0_norm;
  c.rhs = 5.0 * cfg.a0;
  c.holds = c.lhs < c.rhs;
  c.margin = (c.rhs - c.lhs) / c.rhs;
  return c;
}

Stepper::Stepper(const SimConfig& cfg, const SpatialDiscretization& disc)
    : cfg_(cfg), disc_(disc) {
  if (cfg.a0 <= 0.0) throw ParameterOutOfRange("a0 must be positive");
  if (cfg.dt <= 0.0 || cfg.dt > cfg.T) throw ParameterOutOfRange("need 0 < dt <= T");
  if (cfg.k < 0 || cfg.k > 2) throw ParameterOutOfRange("memory order k must be 0, 1 or 2");

  A_ = Eigen::SparseMatrix<double>(-disc.D3) + cfg.a0 * disc.D5 - cfg.a1 * disc.D1;
  Eigen::SparseMatrix<double> I(disc.N, disc.N);
  I.setIdentity();
  Eigen::SparseMatrix<double> M1 = I - (cfg.dt / 2.0) * A_;
  M2_ = I + (cfg.dt / 2.0) * A_;
  lu_.compute(M1);
  if (lu_.info() != Eigen::Success)
    throw LinearSolveFailure("Crank-Nicolson system is singular");
}

Eigen::VectorXd Stepper::nonlinearity(const Eigen::VectorXd& u) const {
  if (!cfg_.nonlinear) return Eigen::VectorXd::Zero(u.size());
  // skew split of u*u_x: (u o D1 u + D1(u o u))/3, energy-neutral for
  // antisymmetric D1
  const Eigen::VectorXd du = disc_.D1 * u;
  return (u.cwiseProduct(du) + disc_.D1 * u.cwiseProduct(u)) / 3.0;
}

Eigen::VectorXd Stepper::solve_cn(const Eigen::VectorXd& u, const Eigen::VectorXd& expl) const {
  const Eigen::VectorXd rhs = M2_ * u - cfg_.dt * expl;
  Eigen::VectorXd out = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw LinearSolveFailure("Crank-Nicolson solve failed");
  return out;
}

SimState Stepper::initial_state() const {
  SimState st;
  st.t = 0.0;
  st.u.resize(disc_.N);
  for (int i = 0; i < disc_.N; ++i) st.u[i] = cfg_.u0 ? cfg_.u0(disc_.x[i]) : 0.0;
  auto hist_fn = cfg_.u0_history ? cfg_.u0_history : [](double, double) { return 0.0; };
  const double S = cfg_.s_max.value_or(cfg_.kernel.s_max(1e-12));
  st.hist = init_history(hist_fn, disc_, cfg_.kernel, S, cfg_.s_nodes, cfg_.mode, cfg_.k,
                         cfg_.s_ratio);
  return st;
}

void Stepper::step(SimState& state) {
  const double dt = cfg_.dt;
  if (blowup_gate_ == 0.0)
    blowup_gate_ = 1e6 * std::max(norm_L2(disc_, state.u), 1e-12);

  const Eigen::VectorXd mem_now = memory_integral(state.hist, disc_, cfg_.k);
  const Eigen::VectorXd nl_now = nonlinearity(state.u);
  const Eigen::VectorXd src = cfg_.source ? cfg_.source(state.t + dt / 2.0)
                                          : Eigen::VectorXd();

  Eigen::VectorXd mem_half, nl_half, u_new;
  if (!have_prev_) {
    // fixed-point bootstrap of the CN map (keeps the very first step 2nd order)
    Eigen::VectorXd guess = state.u + dt * (A_ * state.u - nl_now - mem_now +
                                            (src.size() ? src : Eigen::VectorXd::Zero(disc_.N)));
    for (int it = 0; it < 3; ++it) {
      HistoryField trial = state.hist;
      advance_history(trial, disc_, state.u, guess, dt);
      mem_half = 0.5 * (mem_now + memory_integral(trial, disc_, cfg_.k));
      nl_half = 0.5 * (nl_now + nonlinearity(guess));
      Eigen::VectorXd expl = nl_half + mem_half;
      if (src.size()) expl -= src;
      guess = solve_cn(state.u, expl);
    }
    HistoryField trial = state.hist;
    advance_history(trial, disc_, state.u, guess, dt);
    mem_half = 0.5 * (mem_now + memory_integral(trial, disc_, cfg_.k));
    nl_half = 0.5 * (nl_now + nonlinearity(guess));
  } else {
    mem_half = 1.5 * mem_now - 0.5 * mem_prev_;
    nl_half = 1.5 * nl_now - 0.5 * nl_prev_;
  }
  mem_prev_ = mem_now;
  nl_prev_ = nl_now;
  have_prev_ = true;

  Eigen::VectorXd expl = nl_half + mem_half;
  if (src.size()) expl -= src;
  u_new = solve_cn(state.u, expl);
  if (!u_new.allFinite() || norm_L2(disc_, u_new) > blowup_gate_)
    throw BlowupDetected("state norm exceeded 1e6x the initial norm");

  last_leak_ = -disc_.h * nl_half.dot(0.5 * (state.u + u_new));
  advance_history(state.hist, disc_, state.u, u_new, dt);
  state.u = u_new;
  state.t += dt;
}

RunResult run(const SimConfig& cfg) {
  RunResult out;
  const SpatialDiscretization disc = build_discretization(cfg.L, cfg.N, cfg.scheme_order);
  out.constants = estimate_constants(disc);
  Stepper stepper(cfg, disc);
  SimState st = stepper.initial_state();

  const double u0n = norm_L2(disc, st.u);
  const double eta0n = memory_norm(st.hist, disc, cfg.k);
  out.condition = check_condition_140(cfg, out.constants, u0n, eta0n);

  const double E0 = 0.5 * (u0n * u0n + eta0n * eta0n);
  bool have_lc = false;
  LyapunovConstants lc;
  try {
    lc = lyapunov_constants(cfg, out.constants, E0, x_moment(disc, st.u));
    have_lc = true;
  } catch (const NonpositiveD&) {
    // condition failed; F is reported as NaN, the run itself proceeds
  }

  auto record = [&](const SimState& s, double leak) {
    EnergyRecord r;
    r.t = s.t;
    r.u_norm = norm_L2(disc, s.u);
    r.eta_norm_Lg = memory_norm(s.hist, disc, cfg.k);
    r.E = 0.5 * (r.u_norm * r.u_norm + r.eta_norm_Lg * r.eta_norm_Lg);
    const double uxx0 = disc.boundary_trace_uxx0 * s.u;
    r.uxx0 = uxx0;
    r.boundary_diss = -0.5 * cfg.a0 * uxx0 * uxx0;
    r.memory_diss = memory_dissipation(s.hist, disc, cfg.k, cfg.kernel);
    r.nonlinear_leak = leak;
    r.F = have_lc ? lyapunov(s, disc, cfg, lc, r.E)
                  : std::numeric_limits<double>::quiet_NaN();
    out.series.push_back(r);
  };

  record(st, 0.0);
  const long nsteps = std::lround(cfg.T / cfg.dt);
  try {
    for (long n = 0; n < nsteps; ++n) {
      stepper.step(st);
      if ((n + 1) % cfg.record_stride == 0 || n + 1 == nsteps)
        record(st, stepper.last_nonlinear_leak());
    }
  } catch (const Error& e) {
    out.failed = true;
    out.error_message = e.what();
  }
  out.final_state = std::move(st);
  return out;
}

}  // namespace kawahara
