#include "kawahara/presets.hpp"

#include "kawahara/config.hpp"

namespace kawahara {

std::vector<std::string> preset_names() { return {"expo", "poly", "stretched"}; }

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  SimConfig& c = p.config;
  c.L = 2.0 * M_PI;
  c.N = 128;
  c.scheme_order = 2;
  c.a0 = 0.5;
  c.a1 = 0.0;
  c.k = 0;
  c.dt = 5e-3;
  c.T = 50.0;
  c.nonlinear = true;
  c.record_stride = 4;
  c.u0_name = "poly33";
  c.history_name = "decaying";
  c.s_nodes = 160;
  c.preset_name = name;

  if (name == "expo") {
    c.kernel = make_kernel(KernelFamily::Exponential, 1.0, 0.25);
    c.mode = HistoryMode::ExponentialODE;
    c.amplitude = 0.01;
    p.expected_regime = "exponential";
  } else if (name == "poly") {
    c.kernel = make_kernel(KernelFamily::Polynomial, 1.0, 2.0);
    c.mode = HistoryMode::Grid;
    c.amplitude = 0.015;
    p.expected_regime = "polynomial";
  } else if (name == "stretched") {
    c.kernel = make_kernel(KernelFamily::StretchedExponential, 1.0, 1.0, 0.5);
    c.mode = HistoryMode::Grid;
    c.amplitude = 0.012;
    p.expected_regime = "stretched";
  } else {
    throw ParameterOutOfRange("unknown preset '" + name + "' (expo, poly, stretched)");
  }
  resolve_initial_data(c);
  return p;
}

}  // namespace kawahara
