#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "genesynth/odesim.hpp"
#include "support.hpp"

#include <cmath>

using namespace genesynth;
using testsupport::gate_io;
using testsupport::kQuarter;

TEST_CASE("hill functions") {
  CHECK(hill_act(0.4, 0.4, 4) == doctest::Approx(0.5));
  CHECK(hill_act(0.0, 0.4, 4) == 0.0);
  CHECK(hill_act(0.75, 0.41, 4) == doctest::Approx(0.918).epsilon(5e-4));
  CHECK(hill_rep(0.45, 0.45, 3) == doctest::Approx(0.5));
  CHECK(hill_rep(0.0, 0.45, 3) == 1.0);
  CHECK(hill_rep(0.75, 0.45, 3) == doctest::Approx(0.178).epsilon(2e-3));
}

TEST_CASE("activation plus repression is one; drives are bounded and monotone") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng), K = 0.05 + 0.95 * u(rng), n = 0.5 + 5 * u(rng);
    CHECK(std::abs(hill_act(x, K, n) + hill_rep(x, K, n) - 1.0) < 1e-12);
    CHECK(hill_act(x + 0.01, K, n) > hill_act(x, K, n));
    CHECK(hill_rep(x + 0.01, K, n) < hill_rep(x, K, n));

    for (GateKind k : {GateKind::And, GateKind::Or, GateKind::Not}) {
      GateParams g{k, n, 1.0, {K, 0.05 + 0.95 * u(rng)}};
      g.hill_k.resize(static_cast<std::size_t>(arity(k)));
      std::vector<double> in{u(rng), u(rng)};
      in.resize(g.hill_k.size());
      const double d = gate_drive(g, in);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
      for (std::size_t j = 0; j < in.size(); ++j) {
        auto up = in;
        up[j] += 0.05;
        if (k == GateKind::Not)
          CHECK(gate_drive(g, up) <= d);
        else
          CHECK(gate_drive(g, up) >= d);
      }
    }
  }
}

TEST_CASE("gate drive examples and arity") {
  GateParams a{GateKind::And, 4, 1, {0.4, 0.3}};
  const double at_k[] = {0.4, 0.3};
  CHECK(gate_drive(a, at_k) == doctest::Approx(0.25));
  GateParams o{GateKind::Or, 4, 1, {0.4, 0.3}};
  const double zero[] = {0.0, 0.0};
  CHECK(gate_drive(o, zero) == 0.0);
  GateParams n{GateKind::Not, 3, 1, {0.45}};
  const double z1[] = {0.0};
  CHECK(gate_drive(n, z1) == 1.0);
  CHECK_THROWS_AS(gate_drive(n, zero), std::invalid_argument);
}

TEST_CASE("closed form") {
  CHECK(closed_form(1.0, std::log(2.0), 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(closed_form(0.3, 2.0, 0.8, 0.0) == 0.8);
  CHECK(closed_form(0.918, 0.9222, 0.0, 4.0) == doctest::Approx(0.895).epsilon(5e-4));
}

TEST_CASE("closed form matches the integrator on [0, 20]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double K = u(rng), alpha = 0.1 + 2 * u(rng), x0 = u(rng);
    auto grid = uniform_grid(20.0, 0.01);
    auto states = integrate_rk4(
        [&](double, const Step&, std::span<const double> x, std::span<double> dx) {
          dx[0] = alpha * (K - x[0]);
        },
        {x0}, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
      worst = std::max(worst, std::abs(states[j][0] - closed_form(K, alpha, x0, grid[j])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(kQuarter.validate());
  CHECK_THROWS_AS((Thresholds{0.25, 0.75, 0.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Thresholds{0.95, 0.25, 0.1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((Thresholds{0.75, 0.25, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GateParams{GateKind::And, 4, 1, {0.4}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GateParams{GateKind::Not, 0, 1, {0.4}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GateParams{GateKind::Not, 3, 0, {0.4}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((GateParams{GateKind::Not, 3, 1, {1.2}}).validate(), std::invalid_argument);
  CHECK(parse_gate_kind("and") == GateKind::And);
  CHECK_THROWS_AS(parse_gate_kind("xor"), std::invalid_argument);
}

TEST_CASE("truth tables") {
  auto and_rows = truth_table(GateKind::And, 4, 12, gate_io(GateKind::And));
  REQUIRE(and_rows.size() == 4);
  CHECK(and_rows[0].row.output == Level::Low);
  CHECK(and_rows[1].row.output == Level::Low);
  CHECK(and_rows[2].row.output == Level::Low);
  CHECK(and_rows[3].row.output == Level::High);
  CHECK(stl::to_string(and_rows[0].formula) ==
        "G[0,16](u1 <= 0.25 & u2 <= 0.25) -> F[0,4] G[0,12](y <= 0.25)");
  CHECK(stl::parse(stl::to_string(and_rows[3].formula)) == and_rows[3].formula);
  CHECK(and_rows[3].formula ==
        stl::parse("G[0,16](u1 >= 0.75 & u2 >= 0.75) -> F[0,4] G[0,12](y >= 0.75)"));

  auto not_rows = truth_table(GateKind::Not, 4, 12, gate_io(GateKind::Not));
  REQUIRE(not_rows.size() == 2);
  CHECK(not_rows[1].row.inputs[0] == Level::High);
  CHECK(not_rows[1].row.output == Level::Low);

  auto or_rows = truth_table(GateKind::Or, 4, 12, gate_io(GateKind::Or));
  REQUIRE(or_rows.size() == 4);
  CHECK(or_rows[1].row.inputs == std::vector<Level>{Level::Low, Level::High});
  CHECK(or_rows[1].row.output == Level::High);
  CHECK(or_rows[0].row.output == Level::Low);

  CHECK_THROWS_AS(truth_table(GateKind::And, 0, 12, gate_io(GateKind::And)),
                  std::invalid_argument);
}
