#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kawahara/history.hpp"
#include "kawahara/kernel.hpp"
#include "kawahara/spatial.hpp"

namespace kawahara {

struct SimConfig {
  double a0 = 1.0;
  double a1 = 0.0;
  int k = 0;

  double L = 2.0 * M_PI;
  int N = 128;
  int scheme_order = 2;

  double dt = 5e-3;
  double T = 50.0;
  bool nonlinear = true;
  int record_stride = 1;

  MemoryKernel kernel;
  HistoryMode mode = HistoryMode::Grid;
  int s_nodes = 160;
  std::optional<double> s_max;  // default: kernel.s_max(1e-12)
  double s_ratio = 1.15;

  // named initial data; config::resolve_initial_data turns these into the
  // callables below
  std::string u0_name = "poly33";     // poly33 | sine | bump
  std::string history_name = "zero";  // zero | constant | decaying
  double amplitude = 0.01;

  std::function<double(double)> u0;                  // x -> u0(x)
  std::function<double(double, double)> u0_history;  // (x, t>=0) -> past state

  // optional forcing (manufactured solutions); evaluated at the half step
  std::function<Eigen::VectorXd(double)> source;

  std::string preset_name;  // empty unless built from a preset
};

struct SimState {
  double t = 0.0;
  Eigen::VectorXd u;
  HistoryField hist;
};

/// One output row of a run.
struct EnergyRecord {
  double t = 0.0;
  double E = 0.0;
  double F = 0.0;
  double u_norm = 0.0;
  double eta_norm_Lg = 0.0;
  double boundary_diss = 0.0;
  double memory_diss = 0.0;
  double nonlinear_leak = 0.0;
  double uxx0 = 0.0;
};

struct Condition140 {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // (rhs - lhs)/rhs
  double U0_norm = 0.0;
};

Condition140 check_condition_140(const SimConfig& cfg, const EmbeddingConstants& constants,
                                 double u0_norm, double eta0_norm);

/// Crank-Nicolson IMEX stepper: the linear part -D3 + a0*D5 - a1*D1 is
/// implicit (factorized once), the skew-split nonlinearity and the memory term
/// are explicit via 2nd-order extrapolation; the first step bootstraps with a
/// fixed-point iteration of the CN map.
class Stepper {
 public:
  Stepper(const SimConfig& cfg, const SpatialDiscretization& disc);

  SimState initial_state() const;
  void step(SimState& state);

  const SpatialDiscretization& disc() const { return disc_; }
  const SimConfig& config() const { return cfg_; }
  double last_nonlinear_leak() const { return last_leak_; }

 private:
  Eigen::VectorXd nonlinearity(const Eigen::VectorXd& u) const;
  Eigen::VectorXd solve_cn(const Eigen::VectorXd& u, const Eigen::VectorXd& expl) const;

  SimConfig cfg_;
  const SpatialDiscretization& disc_;
  Eigen::SparseMatrix<double> A_, M2_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  double blowup_gate_ = 0.0;

  bool have_prev_ = false;
  Eigen::VectorXd mem_prev_, nl_prev_;
  double last_leak_ = 0.0;
};

struct RunResult {
  std::vector<EnergyRecord> series;
  SimState final_state;
  Condition140 condition;
  EmbeddingConstants constants;
  bool failed = false;        // a step threw; series holds the prefix
  std::string error_message;  // set when failed
};

/// Full driver: builds the grid and history, checks condition (warn-only),
/// records the energy diagnostics every record_stride steps. Deterministic.
RunResult run(const SimConfig& cfg);

}  // namespace kawahara
