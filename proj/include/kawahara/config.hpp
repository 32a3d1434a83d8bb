#pragma once

#include <string>

#include "kawahara/solver.hpp"

namespace kawahara {

/// Named initial-data / history presets, resolved onto SimConfig's callables.
/// u0 shapes (all satisfy the five boundary conditions at the nodes):
///   poly33: amp * x^3 (L-x)^3, peak-normalized
///   sine:   amp * sin^3(pi x / L)
///   bump:   amp * exp(1 - 1/(1-y^2)), y = 2x/L - 1 (compactly supported)
/// history presets: zero; constant (u0 held for all past times);
/// decaying (u0 * e^{-tau}).
void resolve_initial_data(SimConfig& cfg);

/// Flat `section.key = value` text with `#` comments. Unknown and duplicate
/// keys are errors; `sim.a0` is required, everything else has defaults.
SimConfig parse_config_text(const std::string& text);
SimConfig parse_config_file(const std::string& path);

/// Defaults-filled config as parseable text (the `config.resolved` artifact).
std::string emit_config(const SimConfig& cfg);

}  // namespace kawahara
