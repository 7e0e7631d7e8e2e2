#include "genesynth/stl.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace genesynth::stl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Trace = std::vector<double>;

void collect_vars(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          out.insert(n.var);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Eventually> ||
                             std::is_same_v<T, Globally>) {
          collect_vars(*n.arg, out);
        } else if constexpr (!std::is_same_v<T, True>) {
          collect_vars(*n.lhs, out);
          collect_vars(*n.rhs, out);
        }
      },
      f.node());
}

void check_vars(const Formula& f, const Signal& s) {
  std::set<std::string> vars;
  collect_vars(f, vars);
  for (const auto& v : vars)
    if (!s.has(v))
      throw MonitorError("formula refers to unknown variable '" + v + "'");
}

Trace atom_trace(const Atom& a, const Signal& s) {
  auto x = s.values(a.var);
  Trace out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = a.op == Cmp::Ge ? x[i] - a.threshold : a.threshold - x[i];
  return out;
}

// For each i, the sample indices j with t_i + lo <= t_j <= t_i + hi form the
// half-open range [first[i], end[i]). Both sequences are nondecreasing.
struct WindowRanges {
  std::vector<std::size_t> first, end;
};

WindowRanges window_ranges(const std::vector<double>& t, double lo, double hi) {
  const std::size_t n = t.size();
  WindowRanges r{std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
  std::size_t a = 0, b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (a < n && t[a] < t[i] + lo - kTimeEps)
      ++a;
    while (b < n && t[b] <= t[i] + hi + kTimeEps)
      ++b;
    r.first[i] = a;
    r.end[i] = std::max(a, b);
  }
  return r;
}

// Sliding extremum over ranges [first[i], end[i]) with nondecreasing bounds,
// monotonic deque, O(n). `better(a, b)` is true when a should win over b.
template <typename Better>
Trace sliding_extremum(const Trace& v, const std::vector<std::size_t>& first,
                       const std::vector<std::size_t>& end, double empty_value, Better better) {
  const std::size_t n = v.size();
  Trace out(n);
  std::deque<std::size_t> dq;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (next < end[i]) {
      while (!dq.empty() && !better(v[dq.back()], v[next]))
        dq.pop_back();
      dq.push_back(next++);
    }
    while (!dq.empty() && dq.front() < first[i])
      dq.pop_front();
    out[i] = dq.empty() ? empty_value : v[dq.front()];
  }
  return out;
}

Trace sliding_max(const Trace& v, const WindowRanges& w) {
  return sliding_extremum(v, w.first, w.end, -kInf, [](double a, double b) { return a > b; });
}

Trace sliding_min(const Trace& v, const WindowRanges& w) {
  return sliding_extremum(v, w.first, w.end, kInf, [](double a, double b) { return a < b; });
}

// rho(phi1 U[a,b] phi2, t_i) splits at s = first sample >= t_i + a:
//   min( min_{k in [i, s)} r1[k],
//        max_{j in [s, end_i)} min(r2[j], min_{k in [s, j]} r1[k]) ).
// The second term is computed for decreasing s with a deque of candidates
// ordered by index (front = largest). Moving s left caps every candidate by
// r1[s]; capped candidates all share one value, so the run collapses into
// its smallest-index member. Each index enters and leaves once.
Trace until_trace(const std::vector<double>& t, const Trace& r1, const Trace& r2, const Window& w) {
  const std::size_t n = t.size();
  WindowRanges ranges = window_ranges(t, w.lo, w.hi);

  std::vector<std::size_t> self(n);
  for (std::size_t i = 0; i < n; ++i)
    self[i] = i;
  Trace prefix = sliding_extremum(r1, self, ranges.first, kInf,
                                  [](double a, double b) { return a < b; });

  struct Candidate {
    std::size_t index;
    double value;
  };
  std::deque<Candidate> dq;
  Trace out(n);
  std::size_t s = n;
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t start = ranges.first[i];
    while (s > start) {
      --s;
      const double cap = r1[s];
      std::size_t merged = n;
      while (!dq.empty() && dq.front().value >= cap) {
        merged = dq.front().index;
        dq.pop_front();
      }
      if (merged != n)
        dq.push_front({merged, cap});
      const double c = std::min(r2[s], r1[s]);
      while (!dq.empty() && dq.back().value <= c)
        dq.pop_back();
      dq.push_back({s, c});
    }
    while (!dq.empty() && dq.front().index >= ranges.end[i])
      dq.pop_front();
    const double tail = dq.empty() ? -kInf : dq.front().value;
    out[i] = std::min(prefix[i], tail);
  }
  return out;
}

Trace eval(const Formula& f, const Signal& s) {
  return std::visit(
      [&](const auto& n) -> Trace {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, True>) {
          return Trace(s.size(), kInf);
        } else if constexpr (std::is_same_v<T, Atom>) {
          return atom_trace(n, s);
        } else if constexpr (std::is_same_v<T, Not>) {
          Trace r = eval(*n.arg, s);
          for (auto& x : r)
            x = -x;
          return r;
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or> ||
                             std::is_same_v<T, Implies>) {
          Trace a = eval(*n.lhs, s);
          Trace b = eval(*n.rhs, s);
          for (std::size_t i = 0; i < a.size(); ++i) {
            if constexpr (std::is_same_v<T, And>)
              a[i] = std::min(a[i], b[i]);
            else if constexpr (std::is_same_v<T, Or>)
              a[i] = std::max(a[i], b[i]);
            else
              a[i] = std::max(-a[i], b[i]);
          }
          return a;
        } else if constexpr (std::is_same_v<T, Eventually>) {
          return sliding_max(eval(*n.arg, s), window_ranges(s.times(), n.window.lo, n.window.hi));
        } else if constexpr (std::is_same_v<T, Globally>) {
          return sliding_min(eval(*n.arg, s), window_ranges(s.times(), n.window.lo, n.window.hi));
        } else {
          return until_trace(s.times(), eval(*n.lhs, s), eval(*n.rhs, s), n.window);
        }
      },
      f.node());
}

// ---------------------------------------------------------------------------
// Reference semantics: nested loops straight from the definition.

Trace eval_reference(const Formula& f, const Signal& s) {
  const auto& t = s.times();
  const std::size_t n = t.size();
  return std::visit(
      [&](const auto& node) -> Trace {
        using T = std::decay_t<decltype(node)>;
        Trace out(n);
        if constexpr (std::is_same_v<T, True>) {
          std::fill(out.begin(), out.end(), kInf);
        } else if constexpr (std::is_same_v<T, Atom>) {
          auto x = s.values(node.var);
          for (std::size_t i = 0; i < n; ++i)
            out[i] = node.op == Cmp::Ge ? x[i] - node.threshold : node.threshold - x[i];
        } else if constexpr (std::is_same_v<T, Not>) {
          Trace r = eval_reference(*node.arg, s);
          for (std::size_t i = 0; i < n; ++i)
            out[i] = -r[i];
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or> ||
                             std::is_same_v<T, Implies>) {
          Trace a = eval_reference(*node.lhs, s);
          Trace b = eval_reference(*node.rhs, s);
          for (std::size_t i = 0; i < n; ++i) {
            if constexpr (std::is_same_v<T, And>)
              out[i] = a[i] < b[i] ? a[i] : b[i];
            else if constexpr (std::is_same_v<T, Or>)
              out[i] = a[i] > b[i] ? a[i] : b[i];
            else
              out[i] = -a[i] > b[i] ? -a[i] : b[i];
          }
        } else if constexpr (std::is_same_v<T, Eventually> || std::is_same_v<T, Globally>) {
          constexpr bool is_f = std::is_same_v<T, Eventually>;
          Trace r = eval_reference(*node.arg, s);
          for (std::size_t i = 0; i < n; ++i) {
            double acc = is_f ? -kInf : kInf;
            for (std::size_t j = i; j < n; ++j) {
              if (t[j] > t[i] + node.window.hi + kTimeEps)
                break;
              if (t[j] < t[i] + node.window.lo - kTimeEps)
                continue;
              acc = is_f ? std::max(acc, r[j]) : std::min(acc, r[j]);
            }
            out[i] = acc;
          }
        } else {
          Trace r1 = eval_reference(*node.lhs, s);
          Trace r2 = eval_reference(*node.rhs, s);
          for (std::size_t i = 0; i < n; ++i) {
            double best = -kInf;
            double run = kInf;
            for (std::size_t j = i; j < n; ++j) {
              if (t[j] > t[i] + node.window.hi + kTimeEps)
                break;
              run = std::min(run, r1[j]);
              if (t[j] >= t[i] + node.window.lo - kTimeEps)
                best = std::max(best, std::min(r2[j], run));
            }
            out[i] = best;
          }
        }
        return out;
      },
      f.node());
}

} // namespace

std::vector<double> robustness_trace(const Formula& f, const Signal& s) {
  check_vars(f, s);
  return eval(f, s);
}

Robustness robustness(const Formula& f, const Signal& s, double t) {
  check_vars(f, s);
  const double need = required_horizon(f);
  if (t + need > s.t_end() + kTimeEps)
    throw HorizonError(t + need, s.t_end());
  std::size_t idx = 0;
  try {
    idx = s.index_of(t);
  } catch (const SignalError& e) {
    throw MonitorError(e.what());
  }
  return {eval(f, s)[idx]};
}

Satisfaction satisfies(const Formula& f, const Signal& s, double t) {
  Robustness r = robustness(f, s, t);
  return {r.satisfied(), r.marginal()};
}

namespace reference {

std::vector<double> robustness_trace(const Formula& f, const Signal& s) {
  check_vars(f, s);
  return eval_reference(f, s);
}

} // namespace reference

} // namespace genesynth::stl
