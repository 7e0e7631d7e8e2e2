#pragma once

#include "genesynth/signal.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace genesynth::stl {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class MonitorError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown when the signal is too short for the formula's temporal windows.
class HorizonError : public MonitorError {
public:
  HorizonError(double required, double available);
  double required() const { return required_; }
  double available() const { return available_; }

private:
  double required_;
  double available_;
};

enum class Cmp { Ge, Le };

/// Closed time window [lo, hi], 0 <= lo < hi.
struct Window {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Window&, const Window&) = default;
};

class Formula;

struct True {};
struct Atom {
  std::string var;
  Cmp op = Cmp::Ge;
  double threshold = 0.0;
};
struct Not {
  std::shared_ptr<const Formula> arg;
};
struct And {
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Or {
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Implies {
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Until {
  Window window;
  std::shared_ptr<const Formula> lhs, rhs;
};
struct Eventually {
  Window window;
  std::shared_ptr<const Formula> arg;
};
struct Globally {
  Window window;
  std::shared_ptr<const Formula> arg;
};

using Node = std::variant<True, Atom, Not, And, Or, Implies, Until, Eventually, Globally>;

/// Immutable STL formula. Copies share structure.
class Formula {
public:
  explicit Formula(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

  const Node& node() const { return *node_; }

  template <typename T> bool is() const { return std::holds_alternative<T>(*node_); }
  template <typename T> const T& as() const { return std::get<T>(*node_); }

private:
  std::shared_ptr<const Node> node_;
};

/// Structural equality (exact threshold and window comparison).
bool operator==(const Formula& a, const Formula& b);

Formula truth();
Formula atom(std::string var, Cmp op, double threshold);
Formula ge(std::string var, double threshold);
Formula le(std::string var, double threshold);
Formula negate(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula until(double lo, double hi, Formula a, Formula b);
Formula eventually(double lo, double hi, Formula f);
Formula globally(double lo, double hi, Formula f);

/// Parses the ASCII grammar:
///   true | ident >= num | ident <= num | !f | f & f | f | f | f -> f
///   | G[a,b] f | F[a,b] f | f U[a,b] f | (f)
/// Precedence, tightest first: unary (!, G, F), U, &, |, ->.
/// `&` and `|` associate left, `->` right; `U` does not chain.
Formula parse(std::string_view text);

/// Renders in the grammar accepted by parse(); parse(to_string(f)) == f.
std::string to_string(const Formula& f);

/// Time span beyond t needed to evaluate f at t.
double required_horizon(const Formula& f);

struct Robustness {
  double value = 0.0;

  bool satisfied() const { return value >= 0.0; }
  bool marginal() const { return value == 0.0; }
};

struct Satisfaction {
  bool holds = false;
  bool marginal = false;
};

/// Robustness of f at every sample point of s. Windows running past the end
/// of the signal are truncated to the available samples; an empty window
/// yields -inf for F/U and +inf for G.
std::vector<double> robustness_trace(const Formula& f, const Signal& s);

/// Robustness at sample time t; requires t + required_horizon(f) <= t_end.
Robustness robustness(const Formula& f, const Signal& s, double t = 0.0);

Satisfaction satisfies(const Formula& f, const Signal& s, double t = 0.0);

namespace reference {

/// Direct O(n * window) evaluation of the quantitative semantics, kept as an
/// independent check on robustness_trace().
std::vector<double> robustness_trace(const Formula& f, const Signal& s);

} // namespace reference

} // namespace genesynth::stl
