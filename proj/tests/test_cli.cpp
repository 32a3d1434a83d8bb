#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kawahara/cli.hpp"
#include "kawahara/diagnostics.hpp"

using namespace kawahara;
namespace fs = std::filesystem;

namespace {

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"kawahara"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : owned) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("kawahara_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmallConfig =
    "sim.a0 = 0.5\n"
    "sim.T = 0.5\n"
    "space.N = 48\n"
    "kernel.family = exponential\n"
    "kernel.q1 = 0.25\n"
    "init.amplitude = 0.01\n"
    "init.history = decaying\n";

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli({"simulate"}) == 1);           // missing required options
  CHECK(cli({"no-such-command"}) == 1);
}

TEST_CASE("simulate writes the artifact set deterministically") {
  TempDir td("simulate");
  const std::string cfg = write_file(td.path / "run.cfg", kSmallConfig);
  const std::string out1 = (td.path / "out1").string();
  const std::string out2 = (td.path / "out2").string();
  CHECK(cli({"simulate", "--config", cfg, "--out", out1}) == 0);
  CHECK(cli({"simulate", "--config", cfg, "--out", out2}) == 0);

  for (const char* f : {"series.csv", "summary.txt", "config.resolved"})
    CHECK(fs::exists(fs::path(out1) / f));
  CHECK(slurp(fs::path(out1) / "series.csv") == slurp(fs::path(out2) / "series.csv"));

  const auto series = read_csv((fs::path(out1) / "series.csv").string());
  CHECK(series.size() > 10);
  CHECK(series.front().E > 0.0);

  // the resolved config reruns to the same series
  const std::string out3 = (td.path / "out3").string();
  CHECK(cli({"simulate", "--config", (fs::path(out1) / "config.resolved").string(), "--out",
             out3}) == 0);
  CHECK(slurp(fs::path(out3) / "series.csv") == slurp(fs::path(out1) / "series.csv"));
}

TEST_CASE("zero initial data produces an identically zero energy column") {
  TempDir td("zero");
  const std::string cfg = write_file(
      td.path / "run.cfg", std::string(kSmallConfig) + "init.amplitude = 0\n");
  // amplitude key appears twice -> duplicate-key parse error, exit 2
  CHECK(cli({"simulate", "--config", cfg, "--out", (td.path / "o").string()}) == 2);

  const std::string cfg2 = write_file(td.path / "run2.cfg",
                                      "sim.a0 = 0.5\nsim.T = 0.25\nspace.N = 48\n"
                                      "init.amplitude = 0\n");
  CHECK(cli({"simulate", "--config", cfg2, "--out", (td.path / "o2").string()}) == 0);
  for (const auto& r : read_csv((td.path / "o2" / "series.csv").string())) CHECK(r.E == 0.0);
}

TEST_CASE("validate-kernel and check-condition exit codes") {
  TempDir td("check");
  const std::string good = write_file(td.path / "good.cfg", kSmallConfig);
  CHECK(cli({"validate-kernel", "--config", good}) == 0);
  CHECK(cli({"check-condition", "--config", good}) == 0);

  const std::string big = write_file(td.path / "big.cfg",
                                     "sim.a0 = 0.5\nspace.N = 48\ninit.amplitude = 9\n");
  CHECK(cli({"check-condition", "--config", big}) == 3);

  const std::string bad = write_file(td.path / "bad.cfg",
                                     "sim.a0 = 0.5\nkernel.family = polynomial\n"
                                     "kernel.q1 = 0.5\n");
  CHECK(cli({"validate-kernel", "--config", bad}) == 3);
}

TEST_CASE("fit on a simulated series reports a positive rate") {
  TempDir td("fit");
  const std::string cfg = write_file(td.path / "run.cfg", kSmallConfig);
  const std::string out = (td.path / "out").string();
  REQUIRE(cli({"simulate", "--config", cfg, "--out", out}) == 0);
  CHECK(cli({"fit", "--series", out + "/series.csv", "--model", "exp"}) == 0);
  CHECK(cli({"fit", "--series", out + "/series.csv", "--model", "xi", "--config", cfg}) == 0);
  CHECK(cli({"fit", "--series", out + "/series.csv", "--model", "xi"}) == 1);
  CHECK(cli({"fit", "--series", (td.path / "missing.csv").string()}) == 2);
}

TEST_CASE("sweep runs every variation into its own directory") {
  TempDir td("sweep");
  const std::string cfg = write_file(td.path / "run.cfg", kSmallConfig);
  const std::string out = (td.path / "out").string();
  setenv("KAWAHARA_THREADS", "2", 1);
  CHECK(cli({"sweep", "--config", cfg, "--vary", "kernel.q1=0.25,0.5", "--out", out}) == 0);
  unsetenv("KAWAHARA_THREADS");
  for (const char* v : {"kernel.q1=0.25", "kernel.q1=0.5"})
    CHECK(fs::exists(fs::path(out) / v / "series.csv"));

  // concurrency level must not change results: rerun sequentially
  const std::string out1 = (td.path / "out1").string();
  setenv("KAWAHARA_THREADS", "1", 1);
  CHECK(cli({"sweep", "--config", cfg, "--vary", "kernel.q1=0.25,0.5", "--out", out1}) == 0);
  unsetenv("KAWAHARA_THREADS");
  CHECK(slurp(fs::path(out) / "kernel.q1=0.25" / "series.csv") ==
        slurp(fs::path(out1) / "kernel.q1=0.25" / "series.csv"));

  // an invalid variation value fails before any run starts
  CHECK(cli({"sweep", "--config", cfg, "--vary", "kernel.q1=0.25,zzz",
             "--out", (td.path / "bad").string()}) == 2);
}
