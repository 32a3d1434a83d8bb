#include <doctest.h>

#include <cmath>

#include "kawahara/config.hpp"

using namespace kawahara;

TEST_CASE("minimal config fills documented defaults") {
  const SimConfig c = parse_config_text("sim.a0 = 1\nkernel.family = exponential\n");
  CHECK(c.a0 == 1.0);
  CHECK(c.a1 == 0.0);
  CHECK(c.L == doctest::Approx(2.0 * M_PI));
  CHECK(c.N == 128);
  CHECK(c.scheme_order == 2);
  CHECK(c.k == 0);
  CHECK(c.dt == 5e-3);
  CHECK(c.T == 50.0);
  CHECK(c.nonlinear);
  CHECK(c.kernel.family == KernelFamily::Exponential);
  CHECK(c.kernel.d1 == 1.0);
  CHECK(c.kernel.q1 == 1.0);
  CHECK(c.mode == HistoryMode::ExponentialODE);  // auto resolves per family
  CHECK(c.u0_name == "poly33");
  CHECK(c.history_name == "zero");
  REQUIRE(c.u0);
  CHECK(c.u0(0.0) == 0.0);
}

TEST_CASE("comments, whitespace, and blank lines are tolerated") {
  const SimConfig c = parse_config_text(
      "# a comment\n"
      "  sim.a0   =  2.5   # trailing comment\n"
      "\n"
      "space.N = 64\n");
  CHECK(c.a0 == 2.5);
  CHECK(c.N == 64);
}

TEST_CASE("error taxonomy") {
  CHECK_THROWS_AS(parse_config_text("space.N = 64\n"), MissingRequired);
  CHECK_THROWS_AS(parse_config_text("sim.a0 = 1\nsim.bogus = 2\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config_text("sim.a0 = 1\nnot a key value line\n"), ParseError);
  CHECK_THROWS_AS(parse_config_text("sim.a0 = x\n"), ParseError);

  SUBCASE("duplicate key names both lines") {
    try {
      parse_config_text("sim.a0 = 1\nspace.N = 64\nsim.a0 = 2\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }

  SUBCASE("polynomial kernel with non-integrable exponent is rejected") {
    try {
      parse_config_text("sim.a0 = 1\nkernel.family = polynomial\nkernel.q1 = 0.5\n");
      FAIL("expected ParameterOutOfRange");
    } catch (const ParameterOutOfRange& e) {
      CHECK(std::string(e.what()).find("q1 > 1") != std::string::npos);
    }
  }
}

TEST_CASE("initial-data presets satisfy the boundary conditions") {
  for (const char* name : {"poly33", "sine", "bump"}) {
    SimConfig c = parse_config_text("sim.a0 = 1\ninit.u0 = " + std::string(name) + "\n");
    const double L = c.L, eps = 1e-6;
    auto f = c.u0;
    CHECK(std::abs(f(0.0)) < 1e-12);
    CHECK(std::abs(f(L)) < 1e-12);
    CHECK(std::abs((f(eps) - f(0.0)) / eps) < 1e-4);            // u'(0) = 0
    CHECK(std::abs((f(L) - f(L - eps)) / eps) < 1e-4);          // u'(L) = 0
    CHECK(std::abs(f(L - eps) - 2 * f(L - eps / 2)) < 1e-7);    // u''(L) ~ 0 (curvature)
    CHECK(f(L / 2.0) > 0.0);
  }
}

TEST_CASE("history presets") {
  SimConfig c = parse_config_text("sim.a0 = 1\ninit.history = decaying\n");
  const double v0 = c.u0(c.L / 2);
  CHECK(c.u0_history(c.L / 2, 0.0) == doctest::Approx(v0));
  CHECK(c.u0_history(c.L / 2, 1.0) == doctest::Approx(v0 * std::exp(-1.0)));

  c = parse_config_text("sim.a0 = 1\ninit.history = constant\n");
  CHECK(c.u0_history(c.L / 2, 7.0) == doctest::Approx(c.u0(c.L / 2)));

  c = parse_config_text("sim.a0 = 1\n");
  CHECK(c.u0_history(c.L / 2, 3.0) == 0.0);
}

TEST_CASE("round trip parse(emit(config)) preserves every field") {
  const SimConfig a = parse_config_text(
      "sim.a0 = 0.5\nsim.a1 = 0.125\nsim.dt = 0.004\nsim.T = 12\nsim.nonlinear = false\n"
      "space.L = 3.5\nspace.N = 96\nspace.order = 2\n"
      "memory.k = 1\nmemory.s_nodes = 200\nmemory.mode = grid\nmemory.s_ratio = 1.1\n"
      "init.u0 = bump\ninit.amplitude = 0.03\ninit.history = constant\n"
      "kernel.family = stretched\nkernel.d1 = 2\nkernel.q1 = 1.5\nkernel.p1 = 0.25\n");
  const SimConfig b = parse_config_text(emit_config(a));
  CHECK(b.a0 == a.a0);
  CHECK(b.a1 == a.a1);
  CHECK(b.dt == a.dt);
  CHECK(b.T == a.T);
  CHECK(b.nonlinear == a.nonlinear);
  CHECK(b.L == a.L);
  CHECK(b.N == a.N);
  CHECK(b.k == a.k);
  CHECK(b.s_nodes == a.s_nodes);
  CHECK(b.s_ratio == a.s_ratio);
  CHECK(b.mode == a.mode);
  CHECK(b.u0_name == a.u0_name);
  CHECK(b.amplitude == a.amplitude);
  CHECK(b.history_name == a.history_name);
  CHECK(b.kernel.family == a.kernel.family);
  CHECK(b.kernel.d1 == a.kernel.d1);
  CHECK(b.kernel.q1 == a.kernel.q1);
  CHECK(b.kernel.p1 == a.kernel.p1);
  CHECK(b.kernel.c0 == a.kernel.c0);
  CHECK(b.kernel.g0 == a.kernel.g0);
}

TEST_CASE("explicit memory mode is honored") {
  SimConfig c = parse_config_text("sim.a0 = 1\nmemory.mode = grid\n");
  CHECK(c.mode == HistoryMode::Grid);
  c = parse_config_text("sim.a0 = 1\nmemory.mode = expo-ode\n");
  CHECK(c.mode == HistoryMode::ExponentialODE);
  CHECK_THROWS_AS(parse_config_text("sim.a0 = 1\nmemory.mode = nope\n"), ParseError);
}
