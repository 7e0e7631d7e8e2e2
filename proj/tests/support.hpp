#pragma once

#include "genesynth/gatelib.hpp"
#include "genesynth/netgraph.hpp"
#include "genesynth/signal.hpp"
#include "genesynth/stl.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using namespace genesynth;

inline const Thresholds kQuarter{0.75, 0.25, 0.1};
inline const Thresholds kThird{2.0 / 3.0, 1.0 / 3.0, 0.1};

inline Circuit half_adder(const Thresholds& th = kQuarter) {
  std::vector<GateSpec> g = {{"D", GateKind::Not, {"xB"}, "xD"},
                             {"E", GateKind::And, {"xA", "xD"}, "xE"},
                             {"F", GateKind::Not, {"xA"}, "xF"},
                             {"G", GateKind::And, {"xF", "xB"}, "xG"},
                             {"S", GateKind::Or, {"xE", "xG"}, "xS"},
                             {"C", GateKind::And, {"xA", "xB"}, "xC"}};
  return Circuit(g, {"xA", "xB"}, {{"S", "S"}, {"C", "C"}}, {{"*", th}});
}

inline std::map<std::string, GateParams> half_adder_params(double alpha_c = 0.35) {
  return {{"D", {GateKind::Not, 3, 1.0, {0.45}}},
          {"F", {GateKind::Not, 3, 1.0, {0.45}}},
          {"E", {GateKind::And, 4, 1.0, {0.38, 0.38}}},
          {"G", {GateKind::And, 4, 1.0, {0.38, 0.38}}},
          {"S", {GateKind::Or, 4, 1.0, {0.45, 0.45}}},
          {"C", {GateKind::And, 4, alpha_c, {0.38, 0.38}}}};
}

inline GateSignals gate_io(GateKind kind, const Thresholds& th = kQuarter) {
  GateSignals io;
  for (int i = 0; i < arity(kind); ++i) {
    io.input_vars.push_back("u" + std::to_string(i + 1));
    io.input_thresholds.push_back(th);
  }
  io.output_var = "y";
  io.output_thresholds = th;
  return io;
}

/// Random piecewise-linear signal over variables `vars`, sampled on either a
/// uniform or a jittered grid.
inline Signal random_signal(std::mt19937_64& rng, const std::vector<std::string>& vars,
                            std::size_t samples, double step) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t{0.0};
  const bool jitter = unit(rng) < 0.3;
  while (t.size() < samples)
    t.push_back(t.back() + (jitter ? step * (0.25 + 1.5 * unit(rng)) : step));
  if (!jitter)
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = step * static_cast<double>(i);
  std::vector<std::vector<double>> cols;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    std::vector<double> c(samples);
    double x = unit(rng);
    for (auto& s : c) {
      if (unit(rng) < 0.2)
        x = unit(rng);
      else
        x = std::clamp(x + 0.15 * (unit(rng) - 0.5), 0.0, 1.0);
      s = x;
    }
    cols.push_back(std::move(c));
  }
  return Signal(t, vars, cols);
}

/// Random formula over `vars`. Thresholds are drawn from a continuous
/// distribution so exact ties with samples are rare.
inline stl::Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                   int depth, double max_window) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  auto window = [&] {
    double a = unit(rng) < 0.3 ? 0.0 : unit(rng) * max_window;
    double b = a + 0.05 + unit(rng) * max_window;
    return std::pair{a, b};
  };
  const int c = pick(rng);
  const std::string& v = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
  switch (c) {
  case 0:
    return stl::ge(v, unit(rng));
  case 1:
    return unit(rng) < 0.05 ? stl::truth() : stl::le(v, unit(rng));
  case 2:
    return stl::negate(random_formula(rng, vars, depth - 1, max_window));
  case 3:
    return stl::conj(random_formula(rng, vars, depth - 1, max_window),
                     random_formula(rng, vars, depth - 1, max_window));
  case 4:
    return stl::disj(random_formula(rng, vars, depth - 1, max_window),
                     random_formula(rng, vars, depth - 1, max_window));
  case 5:
    return stl::implies(random_formula(rng, vars, depth - 1, max_window),
                        random_formula(rng, vars, depth - 1, max_window));
  case 6: {
    auto [a, b] = window();
    return stl::until(a, b, random_formula(rng, vars, depth - 1, max_window),
                      random_formula(rng, vars, depth - 1, max_window));
  }
  case 7: {
    auto [a, b] = window();
    return stl::eventually(a, b, random_formula(rng, vars, depth - 1, max_window));
  }
  default: {
    auto [a, b] = window();
    return stl::globally(a, b, random_formula(rng, vars, depth - 1, max_window));
  }
  }
}

/// Boolean semantics on the sample grid, written independently of the
/// quantitative monitor.
inline bool holds(const stl::Formula& f, const Signal& s, std::size_t i) {
  const auto& t = s.times();
  auto in_window = [&](std::size_t j, const stl::Window& w) {
    return t[j] >= t[i] + w.lo - kTimeEps && t[j] <= t[i] + w.hi + kTimeEps;
  };
  if (f.is<stl::True>())
    return true;
  if (f.is<stl::Atom>()) {
    const auto& a = f.as<stl::Atom>();
    const double x = s.values(a.var)[i];
    return a.op == stl::Cmp::Ge ? x >= a.threshold : x <= a.threshold;
  }
  if (f.is<stl::Not>())
    return !holds(*f.as<stl::Not>().arg, s, i);
  if (f.is<stl::And>())
    return holds(*f.as<stl::And>().lhs, s, i) && holds(*f.as<stl::And>().rhs, s, i);
  if (f.is<stl::Or>())
    return holds(*f.as<stl::Or>().lhs, s, i) || holds(*f.as<stl::Or>().rhs, s, i);
  if (f.is<stl::Implies>())
    return !holds(*f.as<stl::Implies>().lhs, s, i) || holds(*f.as<stl::Implies>().rhs, s, i);
  if (f.is<stl::Eventually>()) {
    const auto& e = f.as<stl::Eventually>();
    for (std::size_t j = i; j < s.size(); ++j)
      if (in_window(j, e.window) && holds(*e.arg, s, j))
        return true;
    return false;
  }
  if (f.is<stl::Globally>()) {
    const auto& g = f.as<stl::Globally>();
    for (std::size_t j = i; j < s.size(); ++j)
      if (in_window(j, g.window) && !holds(*g.arg, s, j))
        return false;
    return true;
  }
  const auto& u = f.as<stl::Until>();
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!in_window(j, u.window))
      continue;
    if (!holds(*u.rhs, s, j))
      continue;
    bool all = true;
    for (std::size_t k = i; k <= j && all; ++k)
      all = holds(*u.lhs, s, k);
    if (all)
      return true;
  }
  return false;
}

} // namespace testsupport
