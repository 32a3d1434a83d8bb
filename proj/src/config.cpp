#include "kawahara/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace kawahara {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

double to_double(const Entry& e, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError("key '" + key + "' needs a number, got '" + e.value + "'", e.line);
  }
}

int to_int(const Entry& e, const std::string& key) {
  const double v = to_double(e, key);
  if (v != std::floor(v))
    throw ParseError("key '" + key + "' needs an integer, got '" + e.value + "'", e.line);
  return static_cast<int>(v);
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "1" || e.value == "on") return true;
  if (e.value == "false" || e.value == "0" || e.value == "off") return false;
  throw ParseError("key '" + key + "' needs a boolean, got '" + e.value + "'", e.line);
}

const char* const kKnownKeys[] = {
    "space.L",        "space.N",       "space.order",      "memory.k",
    "memory.s_nodes", "memory.s_max",  "memory.mode",      "memory.s_ratio",
    "sim.a0",         "sim.a1",        "sim.dt",           "sim.T",
    "sim.nonlinear",  "sim.record_stride",                 "init.u0",
    "init.amplitude", "init.history",  "kernel.family",    "kernel.d1",
    "kernel.q1",      "kernel.p1",     "kernel.c0",
};

}  // namespace

void resolve_initial_data(SimConfig& cfg) {
  const double L = cfg.L;
  const double amp = cfg.amplitude;
  std::function<double(double)> shape;
  if (cfg.u0_name == "poly33") {
    const double peak = std::pow(L / 2.0, 6);
    shape = [L, peak](double x) { return x * x * x * std::pow(L - x, 3) / peak; };
  } else if (cfg.u0_name == "sine") {
    shape = [L](double x) { return std::pow(std::sin(M_PI * x / L), 3); };
  } else if (cfg.u0_name == "bump") {
    shape = [L](double x) {
      const double y = 2.0 * x / L - 1.0;
      return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
    };
  } else {
    throw ParameterOutOfRange("unknown init.u0 preset '" + cfg.u0_name + "'");
  }
  cfg.u0 = [shape, amp](double x) { return amp * shape(x); };

  if (cfg.history_name == "zero") {
    cfg.u0_history = [](double, double) { return 0.0; };
  } else if (cfg.history_name == "constant") {
    auto u0 = cfg.u0;
    cfg.u0_history = [u0](double x, double) { return u0(x); };
  } else if (cfg.history_name == "decaying") {
    auto u0 = cfg.u0;
    cfg.u0_history = [u0](double x, double t) { return u0(x) * std::exp(-t); };
  } else {
    throw ParameterOutOfRange("unknown init.history preset '" + cfg.history_name + "'");
  }
}

SimConfig parse_config_text(const std::string& text) {
  std::map<std::string, Entry> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'section.key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("empty key or value", line_no);
    const auto it = kv.find(key);
    if (it != kv.end())
      throw ParseError("duplicate key '" + key + "' (first seen at line " +
                           std::to_string(it->second.line) + ")",
                       line_no);
    kv[key] = {value, line_no};
  }

  for (const auto& [key, e] : kv) {
    if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKnownKeys))
      throw UnknownKey("unknown config key '" + key + "' at line " + std::to_string(e.line));
  }
  if (!kv.count("sim.a0")) throw MissingRequired("missing required key 'sim.a0'");

  SimConfig cfg;
  auto get = [&](const char* key) -> const Entry* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* e = get("space.L")) cfg.L = to_double(*e, "space.L");
  if (auto* e = get("space.N")) cfg.N = to_int(*e, "space.N");
  if (auto* e = get("space.order")) cfg.scheme_order = to_int(*e, "space.order");
  if (auto* e = get("memory.k")) cfg.k = to_int(*e, "memory.k");
  if (auto* e = get("memory.s_nodes")) cfg.s_nodes = to_int(*e, "memory.s_nodes");
  if (auto* e = get("memory.s_max")) cfg.s_max = to_double(*e, "memory.s_max");
  if (auto* e = get("memory.s_ratio")) cfg.s_ratio = to_double(*e, "memory.s_ratio");
  cfg.a0 = to_double(*get("sim.a0"), "sim.a0");
  if (auto* e = get("sim.a1")) cfg.a1 = to_double(*e, "sim.a1");
  if (auto* e = get("sim.dt")) cfg.dt = to_double(*e, "sim.dt");
  if (auto* e = get("sim.T")) cfg.T = to_double(*e, "sim.T");
  if (auto* e = get("sim.nonlinear")) cfg.nonlinear = to_bool(*e, "sim.nonlinear");
  if (auto* e = get("sim.record_stride")) cfg.record_stride = to_int(*e, "sim.record_stride");
  if (auto* e = get("init.u0")) cfg.u0_name = e->value;
  if (auto* e = get("init.amplitude")) cfg.amplitude = to_double(*e, "init.amplitude");
  if (auto* e = get("init.history")) cfg.history_name = e->value;

  KernelFamily family = KernelFamily::Exponential;
  if (auto* e = get("kernel.family")) {
    if (e->value == "exponential") family = KernelFamily::Exponential;
    else if (e->value == "polynomial") family = KernelFamily::Polynomial;
    else if (e->value == "stretched") family = KernelFamily::StretchedExponential;
    else throw ParseError("unknown kernel.family '" + e->value + "'", e->line);
  }
  double d1 = 1.0, q1 = 1.0, p1 = 0.5;
  std::optional<double> c0;
  if (auto* e = get("kernel.d1")) d1 = to_double(*e, "kernel.d1");
  if (auto* e = get("kernel.q1")) q1 = to_double(*e, "kernel.q1");
  if (auto* e = get("kernel.p1")) p1 = to_double(*e, "kernel.p1");
  if (auto* e = get("kernel.c0")) c0 = to_double(*e, "kernel.c0");
  cfg.kernel = make_kernel(family, d1, q1, p1, c0);

  std::string mode = "auto";
  if (auto* e = get("memory.mode")) mode = e->value;
  if (mode == "auto")
    cfg.mode = family == KernelFamily::Exponential ? HistoryMode::ExponentialODE
                                                   : HistoryMode::Grid;
  else if (mode == "grid")
    cfg.mode = HistoryMode::Grid;
  else if (mode == "expo-ode")
    cfg.mode = HistoryMode::ExponentialODE;
  else
    throw ParseError("memory.mode must be grid, expo-ode or auto", get("memory.mode")->line);

  resolve_initial_data(cfg);
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const SimConfig& cfg) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "space.L = " << num(cfg.L) << "\n";
  os << "space.N = " << cfg.N << "\n";
  os << "space.order = " << cfg.scheme_order << "\n";
  os << "memory.k = " << cfg.k << "\n";
  os << "memory.s_nodes = " << cfg.s_nodes << "\n";
  if (cfg.s_max) os << "memory.s_max = " << num(*cfg.s_max) << "\n";
  os << "memory.s_ratio = " << num(cfg.s_ratio) << "\n";
  os << "memory.mode = " << (cfg.mode == HistoryMode::Grid ? "grid" : "expo-ode") << "\n";
  os << "sim.a0 = " << num(cfg.a0) << "\n";
  os << "sim.a1 = " << num(cfg.a1) << "\n";
  os << "sim.dt = " << num(cfg.dt) << "\n";
  os << "sim.T = " << num(cfg.T) << "\n";
  os << "sim.nonlinear = " << (cfg.nonlinear ? "true" : "false") << "\n";
  os << "sim.record_stride = " << cfg.record_stride << "\n";
  os << "init.u0 = " << cfg.u0_name << "\n";
  os << "init.amplitude = " << num(cfg.amplitude) << "\n";
  os << "init.history = " << cfg.history_name << "\n";
  os << "kernel.family = " << to_string(cfg.kernel.family) << "\n";
  os << "kernel.d1 = " << num(cfg.kernel.d1) << "\n";
  os << "kernel.q1 = " << num(cfg.kernel.q1) << "\n";
  if (cfg.kernel.family == KernelFamily::StretchedExponential)
    os << "kernel.p1 = " << num(cfg.kernel.p1) << "\n";
  os << "kernel.c0 = " << num(cfg.kernel.c0) << "\n";
  return os.str();
}

}  // namespace kawahara
