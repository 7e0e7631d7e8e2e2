#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genesynth/odesim.hpp"
#include "genesynth/synth.hpp"
#include "support.hpp"

#include <cmath>

using namespace genesynth;
using testsupport::kQuarter;

namespace {

SimConfig config(double horizon, double step = 0.01) {
  SimConfig c;
  c.horizon = horizon;
  c.step = step;
  return c;
}

std::vector<ConstantStimulus> held(std::initializer_list<double> levels, double T) {
  std::vector<ConstantStimulus> s;
  for (double l : levels)
    s.push_back({l, T});
  return s;
}

GateParams random_gate(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GateKind k = static_cast<GateKind>(std::uniform_int_distribution<int>(0, 2)(rng));
  GateParams g{k, 1 + 4 * u(rng), 0.1 + 2 * u(rng), {}};
  for (int i = 0; i < arity(k); ++i)
    g.hill_k.push_back(0.1 + 0.9 * u(rng));
  return g;
}

} // namespace

TEST_CASE("AND gate at the high thresholds crosses before delta") {
  GateParams g{GateKind::And, 4, 0.9222, {0.40, 0.40}};
  Signal s = simulate_gate(g, held({0.75, 0.75}, 16), 0.0, config(16));
  CHECK(s.sample_at("y", 4.0) >= 0.75);
  CHECK(s.values("u1")[100] == 0.75);
}

TEST_CASE("equilibrium start gives a constant trace") {
  GateParams g{GateKind::Or, 3, 0.7, {0.4, 0.6}};
  const double in[] = {0.3, 0.5};
  const double K = gate_drive(g, in);
  Signal s = simulate_gate(g, held({0.3, 0.5}, 5), K, config(5));
  for (double v : s.values("y"))
    CHECK(v == doctest::Approx(K).epsilon(1e-14));
}

TEST_CASE("fast relaxation") {
  GateParams g{GateKind::Not, 3, 100, {0.45}};
  const double in[] = {0.3};
  const double K = gate_drive(g, in);
  Signal s = simulate_gate(g, held({0.3}, 1), 0.0, config(1, 0.001));
  CHECK(std::abs(s.sample_at("y", 0.1) - K) < 1e-3);
}

TEST_CASE("constant-input simulation matches the closed form") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    GateParams g = random_gate(rng);
    std::vector<double> in;
    std::vector<ConstantStimulus> stim;
    for (int j = 0; j < arity(g.kind); ++j) {
      in.push_back(u(rng));
      stim.push_back({in.back(), 20});
    }
    const double x0 = u(rng);
    Signal s = simulate_gate(g, stim, x0, config(20));
    const double K = gate_drive(g, in);
    auto y = s.values("y");
    double worst = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      worst = std::max(worst, std::abs(y[j] - closed_form(K, g.alpha, x0, s.times()[j])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("half-adder simulation") {
  Circuit ha = testsupport::half_adder();
  auto p = testsupport::half_adder_params();
  SimConfig cfg = config(16);
  cfg.inputs = {{"xA", Schedule::constant(1)}, {"xB", Schedule::constant(1)}};
  Signal s = simulate_circuit(ha, p, cfg);
  CHECK(s.variables() == std::vector<std::string>{"xA", "xB", "xD", "xE", "xF", "xG", "xS", "xC"});
  CHECK(s.sample_at("xS", 16) <= kQuarter.minus);
  CHECK(s.sample_at("xC", 16) >= kQuarter.plus);

  cfg.inputs = {{"xA", Schedule::constant(0)}, {"xB", Schedule::constant(0)}};
  cfg.initial = {{"xD", 0}, {"xF", 0}, {"xE", 1}, {"xG", 1}, {"xS", 1}, {"xC", 1}};
  s = simulate_circuit(ha, p, cfg);
  CHECK(s.sample_at("xS", 16) <= kQuarter.minus);
  CHECK(s.sample_at("xC", 16) <= kQuarter.minus);
}

TEST_CASE("step halving converges") {
  Circuit ha = testsupport::half_adder();
  auto p = testsupport::half_adder_params();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      SimConfig cfg = config(16, 0.01);
      cfg.inputs = {{"xA", Schedule::constant(a)}, {"xB", Schedule::constant(b)}};
      cfg.initial = {{"xD", 1 - b}, {"xS", 0.5}};
      Signal coarse = simulate_circuit(ha, p, cfg);
      cfg.step = 0.005;
      Signal fine = simulate_circuit(ha, p, cfg);
      double worst = 0.0;
      for (const auto& v : coarse.variables())
        for (std::size_t j = 0; j < coarse.size(); ++j)
          worst = std::max(worst, std::abs(coarse.values(v)[j] - fine.values(v)[2 * j]));
      CHECK(worst < 1e-6);
    }
}

TEST_CASE("trajectories stay in the unit interval and runs are deterministic") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    GateParams g = random_gate(rng);
    g.alpha = 0.1 + 10 * u(rng);
    std::vector<InputSource> src;
    for (int j = 0; j < arity(g.kind); ++j)
      src.emplace_back(Schedule({{0, u(rng)}, {2.5, u(rng)}, {7, u(rng)}}));
    const double x0 = u(rng);
    Signal s = simulate_gate(g, src, x0, config(10));
    for (double v : s.values("y")) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-9);
    }
    Signal again = simulate_gate(g, src, x0, config(10));
    auto a = s.values("y"), b = again.values("y");
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("larger inputs give larger AND/OR outputs") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    GateParams g{i % 2 ? GateKind::And : GateKind::Or, 1 + 4 * u(rng), 0.2 + 2 * u(rng),
                 {0.1 + 0.9 * u(rng), 0.1 + 0.9 * u(rng)}};
    std::vector<InputSource> lo, hi;
    for (int j = 0; j < 2; ++j) {
      const double a = u(rng), b = u(rng), w = u(rng), f = u(rng);
      lo.emplace_back(std::function<double(double)>(
          [=](double t) { return a * (0.5 + 0.5 * std::sin(w * t + f)); }));
      hi.emplace_back(std::function<double(double)>(
          [=](double t) { return a * (0.5 + 0.5 * std::sin(w * t + f)) + b * (1 - a); }));
    }
    const double x0 = u(rng);
    Signal sl = simulate_gate(g, lo, x0, config(10));
    Signal sh = simulate_gate(g, hi, x0, config(10));
    for (std::size_t j = 0; j < sl.size(); ++j)
      CHECK(sh.values("y")[j] >= sl.values("y")[j] - 1e-9);
  }
}

TEST_CASE("schedules switch at their breakpoints") {
  Schedule s({{0, 0.2}, {1.0, 0.9}});
  CHECK(s.at(0.5) == 0.2);
  CHECK(s.at(1.0) == 0.9);
  CHECK(s.at(3.0) == 0.9);
  CHECK_THROWS_AS(Schedule({{0.5, 1}}), SimError);
  CHECK_THROWS_AS(Schedule({{0, 1}, {0, 2}}), SimError);

  // a gate driven by a step input follows the closed form from the switch on
  GateParams g{GateKind::Not, 3, 1.0, {0.45}};
  Signal out = simulate_gate(g, std::vector<InputSource>{Schedule({{0, 0.0}, {2.0, 1.0}})}, 0.0,
                             config(6));
  const double x2 = closed_form(1.0, 1.0, 0.0, 2.0);
  const double K = hill_rep(1.0, 0.45, 3);
  CHECK(std::abs(out.sample_at("y", 5.0) - closed_form(K, 1.0, x2, 3.0)) < 1e-6);
  CHECK(out.sample_at("u1", 2.0) == 1.0);
}

TEST_CASE("simulation errors") {
  Circuit ha = testsupport::half_adder();
  auto p = testsupport::half_adder_params();
  SimConfig cfg = config(16);
  CHECK_THROWS_AS(simulate_circuit(ha, p, cfg), SimError);
  cfg.inputs = {{"xA", Schedule::constant(1)}, {"xB", Schedule::constant(1)}};
  auto missing = p;
  missing.erase("C");
  CHECK_THROWS_AS(simulate_circuit(ha, missing, cfg), SimError);
  auto wrong = p;
  wrong["C"] = p["D"];
  CHECK_THROWS_AS(simulate_circuit(ha, wrong, cfg), SimError);
  cfg.initial = {{"xQ", 0.5}};
  CHECK_THROWS_AS(simulate_circuit(ha, p, cfg), SimError);
  cfg.initial = {{"xS", 1.5}};
  CHECK_THROWS_AS(simulate_circuit(ha, p, cfg), SimError);
  cfg.initial.clear();
  cfg.step = 0;
  CHECK_THROWS_AS(simulate_circuit(ha, p, cfg), SimError);
  GateParams g{GateKind::And, 4, 1, {0.4, 0.4}};
  CHECK_THROWS_AS(simulate_gate(g, held({0.5, 0.5}, 1), 0.0, config(2)), SimError);
}

TEST_CASE("verification of the half-adder") {
  Circuit ha = testsupport::half_adder();
  auto tb = propagate_timing(ha, 12, 4);
  auto rep = verify(ha, testsupport::half_adder_params(), tb);
  REQUIRE(rep.rows.size() == 8);
  CHECK(rep.traces.size() == 4);
  for (const auto& r : rep.rows) {
    CAPTURE(r.output);
    CHECK(r.robustness >= 0.0);
  }
  CHECK(rep.passed());

  auto broken = verify(ha, testsupport::half_adder_params(0.05), tb);
  CHECK_FALSE(broken.passed());
  bool carry_failed = false;
  for (const auto& r : broken.rows)
    if (!r.passed()) {
      CHECK(r.output == "C");
      carry_failed = true;
    }
  CHECK(carry_failed);
  CHECK(0.05 < alpha_bound(kQuarter, 12) / 2);

  VerifyOptions short_run;
  short_run.horizon = 10;
  CHECK_THROWS_AS(verify(ha, testsupport::half_adder_params(), tb, short_run), stl::HorizonError);
}

TEST_CASE("one-gate circuit agrees with simulate_gate plus monitoring") {
  Circuit c({{"C", GateKind::And, {"xA", "xB"}, "xC"}}, {"xA", "xB"}, {{"C", "C"}},
            {{"*", kQuarter}});
  const double delta = 2, lambda = 3;
  auto tb = propagate_timing(c, delta, lambda);
  GateParams g{GateKind::And, 4, 1.5, {0.38, 0.38}};
  auto rep = verify(c, {{"C", g}}, tb);
  REQUIRE(rep.rows.size() == 4);
  GateSignals io{{"xA", "xB"}, {kQuarter, kQuarter}, "xC", kQuarter};
  auto rows = truth_table(GateKind::And, delta, lambda, io);
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<ConstantStimulus> stim;
    for (Level l : rows[i].row.inputs)
      stim.push_back({l == Level::High ? 1.0 : 0.0, delta + lambda});
    const double x0 = rows[i].row.output == Level::High ? 0.0 : 1.0;
    Signal s = simulate_gate(g, stim, x0, config(delta + lambda), {"xA", "xB"}, "xC");
    const double r = stl::robustness(rows[i].formula, s).value;
    CHECK(r == rep.rows[i].robustness);
    CHECK((r >= 0) == rep.rows[i].passed());
  }
}
