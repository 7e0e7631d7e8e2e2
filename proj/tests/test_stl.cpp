#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <cmath>

using namespace genesynth;
using namespace genesynth::stl;

namespace {

Signal ramp(double t_end, double step) {
  auto t = uniform_grid(t_end, step);
  return Signal(t, {"x"}, {t});
}

Signal constant(double level, double t_end = 1.0) {
  return from_constant({level, t_end}, 0.1);
}

} // namespace

TEST_CASE("parse a truth-table row formula") {
  Formula f = parse("G[0,16](xA >= 0.75 & xB >= 0.75) -> F[0,4] G[0,12](xC >= 0.75)");
  Formula expect = implies(globally(0, 16, conj(ge("xA", 0.75), ge("xB", 0.75))),
                           eventually(0, 4, globally(0, 12, ge("xC", 0.75))));
  CHECK(f == expect);
  CHECK(parse("true") == truth());
  CHECK(parse("!(x >= 0.5)") == negate(ge("x", 0.5)));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse("a>=1 | b>=1 & c>=1") == disj(ge("a", 1), conj(ge("b", 1), ge("c", 1))));
  CHECK(parse("a>=1 -> b>=1 -> c>=1") == implies(ge("a", 1), implies(ge("b", 1), ge("c", 1))));
  CHECK(parse("a>=1 & b>=1 & c>=1") == conj(conj(ge("a", 1), ge("b", 1)), ge("c", 1)));
  CHECK(parse("!a>=1 & b<=2") == conj(negate(ge("a", 1)), le("b", 2)));
  CHECK(parse("a>=1 U[0,2] b>=1 & c>=0") ==
        conj(until(0, 2, ge("a", 1), ge("b", 1)), ge("c", 0)));
  CHECK(parse("  G [ 1 , 2.5 ]  ( x<=-1e-1 ) ") == globally(1, 2.5, le("x", -0.1)));
  CHECK(parse("F[0,1] G[0,2] x >= 0") == eventually(0, 1, globally(0, 2, ge("x", 0))));
  // identifiers that merely start with an operator letter
  CHECK(parse("Gx >= 1 & F1 <= 2") == conj(ge("Gx", 1), le("F1", 2)));
}

TEST_CASE("parse errors carry a position") {
  try {
    parse("x >= ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(parse("G[2,1](x >= 0)"), ParseError);
  CHECK_THROWS_AS(parse("F[1,1](x >= 0)"), ParseError);
  CHECK_THROWS_AS(parse("x > 0"), ParseError);
  CHECK_THROWS_AS(parse("(x >= 0"), ParseError);
  CHECK_THROWS_AS(parse("x >= 0 y"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(globally(1, 1, truth()), std::invalid_argument);
  CHECK_THROWS_AS(eventually(-1, 1, truth()), std::invalid_argument);
}

TEST_CASE("printing round-trips through the parser") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = testsupport::random_formula(rng, {"x", "y"}, 4, 3.0);
    CAPTURE(to_string(f));
    CHECK(parse(to_string(f)) == f);
  }
  CHECK(to_string(parse("F[0,4] G[0,12](xC >= 0.75)")) == "F[0,4] G[0,12](xC >= 0.75)");
}

TEST_CASE("required horizon") {
  CHECK(required_horizon(parse("x >= 0.5")) == 0);
  CHECK(required_horizon(
            parse("G[0,16](xA >= 0.75 & xB >= 0.75) -> F[0,4] G[0,12](xC >= 0.75)")) == 16);
  CHECK(required_horizon(parse("F[0,2] G[1,3] (x>=0)")) == 5);
  CHECK(required_horizon(parse("(x>=0) U[1,2] G[0,3](x>=0)")) == 5);
}

TEST_CASE("robustness examples") {
  CHECK(robustness(parse("x >= 0.5"), constant(0.8)).value == doctest::Approx(0.3));
  CHECK(robustness(parse("G[0,2](x >= 0.5)"), ramp(3, 0.1)).value == doctest::Approx(-0.5));
  CHECK(robustness(parse("F[0,1] G[0,1](x >= 0.5)"), ramp(3, 0.1)).value ==
        doctest::Approx(0.5));
  CHECK(robustness(parse("x <= 0.5"), constant(0.8)).value == doctest::Approx(-0.3));
  CHECK(std::isinf(robustness(parse("true"), constant(0.8)).value));
}

TEST_CASE("satisfaction and marginal flag") {
  auto a = satisfies(parse("x >= 0.5"), constant(0.8));
  CHECK(a.holds);
  CHECK_FALSE(a.marginal);
  auto b = satisfies(parse("x >= 0.75"), constant(0.75));
  CHECK(b.holds);
  CHECK(b.marginal);
  CHECK_FALSE(satisfies(parse("G[0,2](x >= 0.5)"), ramp(3, 0.1)).holds);
}

TEST_CASE("monitor errors") {
  CHECK_THROWS_AS(robustness(parse("y >= 0"), constant(0.5)), MonitorError);
  try {
    robustness(parse("G[0,2](x >= 0)"), constant(0.5, 1.0));
    FAIL("expected a horizon error");
  } catch (const HorizonError& e) {
    CHECK(e.required() == doctest::Approx(2.0));
    CHECK(e.available() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(robustness(parse("x >= 0"), constant(0.5), 0.05), MonitorError);
  CHECK_NOTHROW(robustness(parse("G[0,0.5](x >= 0)"), constant(0.5), 0.5));
}

TEST_CASE("efficient monitor equals the reference on random pairs") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 400; ++i) {
    Formula f = testsupport::random_formula(rng, {"x", "y"}, 4, 2.0);
    Signal s = testsupport::random_signal(rng, {"x", "y"}, 60, 0.1);
    auto a = robustness_trace(f, s);
    auto b = reference::robustness_trace(f, s);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] != b[k]) {
        CAPTURE(to_string(f));
        CAPTURE(k);
        CHECK(a[k] == b[k]);
      }
      if (std::isfinite(a[k]))
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  CHECK(worst == 0.0);
}

TEST_CASE("sign of robustness agrees with boolean semantics") {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    Formula f = testsupport::random_formula(rng, {"x", "y"}, 3, 1.5);
    Signal s = testsupport::random_signal(rng, {"x", "y"}, 30, 0.1);
    auto r = robustness_trace(f, s);
    for (std::size_t k = 0; k < s.size(); k += 3) {
      if (r[k] == 0.0)
        continue;
      ++checked;
      CHECK((r[k] > 0.0) == testsupport::holds(f, s, k));
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("negation antisymmetry, threshold monotonicity and shift") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Formula f = testsupport::random_formula(rng, {"x"}, 3, 1.0);
    Signal s = testsupport::random_signal(rng, {"x"}, 40, 0.1);
    auto p = robustness_trace(f, s);
    auto n = robustness_trace(negate(f), s);
    for (std::size_t k = 0; k < p.size(); ++k)
      CHECK(n[k] == -p[k]);

    const double th = std::uniform_real_distribution<double>(0, 0.9)(rng);
    auto lo = robustness_trace(ge("x", th), s);
    auto hi = robustness_trace(ge("x", th + 0.05), s);
    for (std::size_t k = 0; k < lo.size(); ++k)
      CHECK(hi[k] < lo[k]);

    // G[a,b] phi at t is the minimum of phi over the window's sample points.
    const double a = 0.3, b = 1.2;
    auto inner = robustness_trace(f, s);
    auto outer = robustness_trace(globally(a, b, f), s);
    const auto& t = s.times();
    for (std::size_t k = 0; k < s.size() && t[k] + b <= s.t_end(); ++k) {
      double m = INFINITY;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (t[j] >= t[k] + a - kTimeEps && t[j] <= t[k] + b + kTimeEps)
          m = std::min(m, inner[j]);
      CHECK(outer[k] == m);
    }
  }
}

TEST_CASE("wiring formula is valid on random signals") {
  std::mt19937_64 rng(314);
  for (int i = 0; i < 300; ++i) {
    const double delta = 0.2 + std::uniform_real_distribution<double>(0, 1)(rng);
    const double lambda = 0.2 + std::uniform_real_distribution<double>(0, 1)(rng);
    const double nu1 = std::uniform_real_distribution<double>(0, 0.5)(rng);
    const double theta = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
    auto w = make_wiring_check("x", theta, delta, lambda, lambda, nu1);
    Signal s = testsupport::random_signal(rng, {"x"}, 400, 0.05);
    CHECK(robustness(w.formula(), s).value >= 0.0);
  }
}
