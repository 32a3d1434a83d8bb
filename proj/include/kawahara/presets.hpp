#pragma once

#include <string>
#include <vector>

#include "kawahara/solver.hpp"

namespace kawahara {

struct ExperimentPreset {
  std::string name;
  SimConfig config;
  std::string expected_regime;  // exponential | polynomial | stretched
};

/// Built-in experiments: `expo`, `poly`, `stretched` — one per kernel family,
/// sized so the small-data condition holds with margin.
ExperimentPreset make_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace kawahara
