#include "genesynth/gatelib.hpp"

#include <cctype>
#include <cmath>

namespace genesynth {

std::string_view to_string(GateKind k) {
  switch (k) {
  case GateKind::And:
    return "AND";
  case GateKind::Or:
    return "OR";
  case GateKind::Not:
    return "NOT";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view text) {
  std::string up;
  for (char c : text)
    up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "AND")
    return GateKind::And;
  if (up == "OR")
    return GateKind::Or;
  if (up == "NOT")
    return GateKind::Not;
  throw std::invalid_argument("unknown gate kind '" + std::string(text) + "'");
}

int arity(GateKind k) { return k == GateKind::Not ? 1 : 2; }

void Thresholds::validate() const {
  if (!(0.0 < minus && minus < plus && plus < 1.0))
    throw std::invalid_argument("thresholds must satisfy 0 < minus < plus < 1");
  if (!(margin > 0.0))
    throw std::invalid_argument("threshold margin p must be > 0");
  if (!(tilde_plus() < 1.0) || !(tilde_minus() > 0.0))
    throw std::invalid_argument("margined thresholds (1+p)plus and (1-p)minus must lie in (0,1)");
}

void GateParams::validate() const {
  if (!(n > 0.0))
    throw std::invalid_argument("Hill coefficient n must be > 0");
  if (!(alpha > 0.0))
    throw std::invalid_argument("degradation rate alpha must be > 0");
  if (static_cast<int>(hill_k.size()) != arity(kind))
    throw std::invalid_argument(std::string(to_string(kind)) + " gate needs " +
                                std::to_string(arity(kind)) + " Hill thresholds");
  for (double k : hill_k)
    if (!(k > 0.0 && k <= 1.0))
      throw std::invalid_argument("Hill threshold K must lie in (0,1]");
}

double hill_act(double x, double K, double n) {
  const double xn = std::pow(x, n);
  return xn / (std::pow(K, n) + xn);
}

double hill_rep(double x, double K, double n) { return 1.0 / (1.0 + std::pow(x / K, n)); }

double gate_drive(const GateParams& g, std::span<const double> inputs) {
  if (static_cast<int>(inputs.size()) != arity(g.kind) ||
      static_cast<int>(g.hill_k.size()) != arity(g.kind))
    throw std::invalid_argument(std::string(to_string(g.kind)) + " gate expects " +
                                std::to_string(arity(g.kind)) + " inputs");
  switch (g.kind) {
  case GateKind::And:
    return hill_act(inputs[0], g.hill_k[0], g.n) * hill_act(inputs[1], g.hill_k[1], g.n);
  case GateKind::Or: {
    const double u = std::pow(inputs[0] / g.hill_k[0], g.n);
    const double v = std::pow(inputs[1] / g.hill_k[1], g.n);
    return (u + v) / (1.0 + u + v);
  }
  case GateKind::Not:
    return hill_rep(inputs[0], g.hill_k[0], g.n);
  }
  return 0.0;
}

double closed_form(double K, double alpha, double x0, double t) {
  return K + (x0 - K) * std::exp(-alpha * t);
}

Level gate_truth(GateKind k, std::span<const Level> in) {
  if (static_cast<int>(in.size()) != arity(k))
    throw std::invalid_argument("input count does not match gate arity");
  switch (k) {
  case GateKind::And:
    return in[0] == Level::High && in[1] == Level::High ? Level::High : Level::Low;
  case GateKind::Or:
    return in[0] == Level::High || in[1] == Level::High ? Level::High : Level::Low;
  case GateKind::Not:
    return in[0] == Level::High ? Level::Low : Level::High;
  }
  return Level::Low;
}

stl::Formula level_atom(const std::string& var, const Thresholds& th, Level level) {
  return level == Level::High ? stl::ge(var, th.plus) : stl::le(var, th.minus);
}

stl::Formula row_antecedent(const ExtendedTruthRow& row, const GateSignals& io) {
  if (row.inputs.size() != io.input_vars.size() ||
      io.input_vars.size() != io.input_thresholds.size())
    throw std::invalid_argument("row inputs do not match gate signals");
  stl::Formula body = level_atom(io.input_vars[0], io.input_thresholds[0], row.inputs[0]);
  for (std::size_t i = 1; i < row.inputs.size(); ++i)
    body = stl::conj(std::move(body),
                     level_atom(io.input_vars[i], io.input_thresholds[i], row.inputs[i]));
  return stl::globally(0.0, row.lambda + row.delta, std::move(body));
}

stl::Formula row_consequent(const ExtendedTruthRow& row, const GateSignals& io) {
  return stl::eventually(
      0.0, row.delta,
      stl::globally(0.0, row.lambda, level_atom(io.output_var, io.output_thresholds, row.output)));
}

stl::Formula row_formula(const ExtendedTruthRow& row, const GateSignals& io) {
  return stl::implies(row_antecedent(row, io), row_consequent(row, io));
}

std::vector<TruthTableEntry> truth_table(GateKind kind, double delta, double lambda,
                                         const GateSignals& io) {
  if (!(delta > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("delta and lambda must be > 0");
  const int k = arity(kind);
  if (static_cast<int>(io.input_vars.size()) != k)
    throw std::invalid_argument("gate signals do not match arity");
  std::vector<TruthTableEntry> rows;
  for (int code = 0; code < (1 << k); ++code) {
    ExtendedTruthRow row;
    row.delta = delta;
    row.lambda = lambda;
    for (int i = 0; i < k; ++i)
      row.inputs.push_back((code >> (k - 1 - i)) & 1 ? Level::High : Level::Low);
    row.output = gate_truth(kind, row.inputs);
    stl::Formula f = row_formula(row, io);
    rows.push_back({std::move(row), std::move(f)});
  }
  return rows;
}

} // namespace genesynth
