#include "kawahara/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kawahara/config.hpp"
#include "kawahara/diagnostics.hpp"
#include "kawahara/presets.hpp"

namespace fs = std::filesystem;

namespace kawahara {

namespace {

struct RunArtifacts {
  RunResult result;
  DecayFit fit;
  bool fitted = false;
};

DecayModel model_for(const MemoryKernel& k) {
  return k.family == KernelFamily::Exponential ? DecayModel::Exponential
                                               : DecayModel::GeneralizedXi;
}

std::string summary_text(const SimConfig& cfg, const RunResult& res, const DecayFit* fit) {
  std::ostringstream os;
  os << "kernel_family = " << to_string(cfg.kernel.family) << "\n";
  os << "condition_140 = " << (res.condition.holds ? "holds" : "violated") << "\n";
  os << "condition_lhs = " << res.condition.lhs << "\n";
  os << "condition_rhs = " << res.condition.rhs << "\n";
  os << "condition_margin = " << res.condition.margin << "\n";
  os << "M_P = " << res.constants.M_P << "\n";
  os << "M_S = " << res.constants.M_S << "\n";
  os << "records = " << res.series.size() << "\n";
  if (!res.series.empty()) {
    os << "E_initial = " << res.series.front().E << "\n";
    os << "E_final = " << res.series.back().E << "\n";
  }
  if (res.failed) os << "run_error = " << res.error_message << "\n";
  if (fit) {
    os << "fit_model = "
       << (fit->model == DecayModel::Exponential ? "exponential" : "generalized-xi") << "\n";
    os << "fit_c = " << fit->rate << "\n";
    os << "fit_c_tilde = " << fit->amplitude << "\n";
    os << "fit_r_squared = " << fit->r_squared << "\n";
    os << "fit_envelope_violations = " << fit->envelope_violations << "\n";
    os << "fit_window = [" << fit->t0 << ", " << fit->t1 << "]\n";
  }
  return os.str();
}

RunArtifacts execute_and_write(const SimConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  RunArtifacts art;
  art.result = run(cfg);
  write_csv((out_dir / "series.csv").string(), art.result.series);
  if (!art.result.failed && !art.result.series.empty() && art.result.series.front().E > 0.0) {
    art.fit = fit_decay(art.result.series, model_for(cfg.kernel), cfg.kernel, cfg.T / 4.0,
                        cfg.T);
    art.fitted = true;
  }
  std::ofstream(out_dir / "summary.txt")
      << summary_text(cfg, art.result, art.fitted ? &art.fit : nullptr);
  std::ofstream(out_dir / "config.resolved") << emit_config(cfg);
  return art;
}

int sweep_threads() {
  if (const char* env = std::getenv("KAWAHARA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 2;
}

std::string strip_key(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::string body = line.substr(0, line.find('#'));
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      std::string k = body.substr(0, eq);
      k.erase(0, k.find_first_not_of(" \t"));
      const auto end = k.find_last_not_of(" \t");
      if (end != std::string::npos) k.erase(end + 1);
      if (k == key) continue;
    }
    out << line << "\n";
  }
  return out.str();
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Kawahara equation with distributed infinite memory: simulation lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir, series_path, model = "exp", preset_name, vary;

  auto* sim = app.add_subcommand("simulate", "run a config, write series + summary");
  sim->add_option("--config", config_path)->required();
  sim->add_option("--out", out_dir)->required();

  auto* vk = app.add_subcommand("validate-kernel", "check the kernel hypotheses");
  vk->add_option("--config", config_path)->required();

  auto* cc = app.add_subcommand("check-condition", "evaluate the small-data condition");
  cc->add_option("--config", config_path)->required();

  auto* fitc = app.add_subcommand("fit", "fit a decay envelope to a series CSV");
  fitc->add_option("--series", series_path)->required();
  fitc->add_option("--model", model)->check(CLI::IsMember({"exp", "xi"}));
  fitc->add_option("--config", config_path, "config supplying the kernel (xi model)");

  auto* pre = app.add_subcommand("preset", "run a built-in experiment");
  pre->add_option("--name", preset_name)->required()->check(CLI::IsMember(preset_names()));
  pre->add_option("--out", out_dir)->required();

  auto* sw = app.add_subcommand("sweep", "run a config over key=v1,v2,... variations");
  sw->add_option("--config", config_path)->required();
  sw->add_option("--vary", vary, "key=a,b,c")->required();
  sw->add_option("--out", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      const SimConfig cfg = parse_config_file(config_path);
      const RunArtifacts art = execute_and_write(cfg, out_dir);
      if (art.result.failed) {
        std::cerr << "run failed: " << art.result.error_message << "\n";
        return 2;
      }
      std::cout << "wrote " << (fs::path(out_dir) / "series.csv").string() << " ("
                << art.result.series.size() << " records)\n";
      return 0;
    }

    if (vk->parsed()) {
      const SimConfig cfg = parse_config_file(config_path);
      const double S = cfg.s_max.value_or(cfg.kernel.s_max(1e-12));
      const ValidationReport rep = validate_hypotheses(cfg.kernel, S, 512);
      std::cout << rep.summary();
      return rep.all_pass() ? 0 : 3;
    }

    if (cc->parsed()) {
      const SimConfig cfg = parse_config_file(config_path);
      const SpatialDiscretization disc = build_discretization(cfg.L, cfg.N, cfg.scheme_order);
      const EmbeddingConstants constants = estimate_constants(disc);
      Stepper stepper(cfg, disc);
      const SimState st = stepper.initial_state();
      const Condition140 c = check_condition_140(cfg, constants, norm_L2(disc, st.u),
                                                 memory_norm(st.hist, disc, cfg.k));
      std::cout << "lhs = " << c.lhs << "\nrhs = " << c.rhs << "\nmargin = " << c.margin
                << "\nholds = " << (c.holds ? "yes" : "no") << "\n";
      return c.holds ? 0 : 3;
    }

    if (fitc->parsed()) {
      const std::vector<EnergyRecord> series = read_csv(series_path);
      if (series.empty()) {
        std::cerr << "empty series\n";
        return 2;
      }
      MemoryKernel kernel = make_kernel(KernelFamily::Exponential, 1.0, 1.0);
      if (!config_path.empty()) kernel = parse_config_file(config_path).kernel;
      else if (model == "xi") {
        std::cerr << "--model xi needs --config for the kernel's xi\n";
        return 1;
      }
      const double T = series.back().t;
      const DecayFit fit =
          fit_decay(series, model == "exp" ? DecayModel::Exponential : DecayModel::GeneralizedXi,
                    kernel, T / 4.0, T);
      std::cout << "rate = " << fit.rate << "\namplitude = " << fit.amplitude
                << "\nr_squared = " << fit.r_squared
                << "\nenvelope_violations = " << fit.envelope_violations << "\n";
      return 0;
    }

    if (pre->parsed()) {
      const ExperimentPreset p = make_preset(preset_name);
      const RunArtifacts art = execute_and_write(p.config, out_dir);
      if (art.result.failed) {
        std::cerr << "run failed: " << art.result.error_message << "\n";
        return 2;
      }
      std::cout << "preset " << p.name << " (" << p.expected_regime << " regime): "
                << art.result.series.size() << " records\n";
      return 0;
    }

    if (sw->parsed()) {
      const auto eq = vary.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--vary needs key=a,b,c\n";
        return 1;
      }
      const std::string key = vary.substr(0, eq);
      std::vector<std::string> values;
      std::stringstream vs(vary.substr(eq + 1));
      std::string v;
      while (std::getline(vs, v, ',')) values.push_back(v);
      if (values.empty()) {
        std::cerr << "--vary needs at least one value\n";
        return 1;
      }

      std::ifstream in(config_path);
      if (!in) throw Error("cannot open config file " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const std::string base = strip_key(ss.str(), key);

      // validate all variations up front so errors surface before any run
      std::vector<SimConfig> cfgs;
      for (const auto& val : values)
        cfgs.push_back(parse_config_text(base + key + " = " + val + "\n"));

      std::atomic<size_t> next{0};
      std::atomic<bool> ok{true};
      std::mutex io;
      auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < values.size(); i = next.fetch_add(1)) {
          const fs::path dir = fs::path(out_dir) / (key + "=" + values[i]);
          const RunArtifacts art = execute_and_write(cfgs[i], dir);
          std::lock_guard<std::mutex> lk(io);
          if (art.result.failed) {
            ok = false;
            std::cerr << dir.string() << ": " << art.result.error_message << "\n";
          } else {
            std::cout << dir.string() << ": E_final = " << art.result.series.back().E << "\n";
          }
        }
      };
      const int nthreads = std::min<int>(sweep_threads(), static_cast<int>(values.size()));
      std::vector<std::thread> pool;
      for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      return ok ? 0 : 2;
    }
  } catch (const ParameterOutOfRange& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace kawahara
