#pragma once

#include "genesynth/stl.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace genesynth {

enum class GateKind { And, Or, Not };

std::string_view to_string(GateKind k);
GateKind parse_gate_kind(std::string_view text);

/// Number of inputs: 2 for AND/OR, 1 for NOT.
int arity(GateKind k);

/// Boolean thresholds of one species, in normalized concentration units.
///
/// `plus` is the activation threshold, `minus` the deactivation threshold,
/// `margin` the safety fraction p used to tighten steady-state targets.
struct Thresholds {
  double plus = 0.75;
  double minus = 0.25;
  double margin = 0.1;

  double tilde_plus() const { return (1.0 + margin) * plus; }
  double tilde_minus() const { return (1.0 - margin) * minus; }

  /// Throws std::invalid_argument unless 0 < θ− < θ+ < 1, p > 0, θ̃+ < 1.
  void validate() const;
};

/// Rescaled kinetic parameters of a single gate: dx/dt = α·drive(inputs) − α·x.
struct GateParams {
  GateKind kind = GateKind::And;
  double n = 1.0;
  double alpha = 1.0;
  std::vector<double> hill_k; // one per input edge

  void validate() const;
};

enum class Level { Low, High };

struct ExtendedTruthRow {
  std::vector<Level> inputs;
  Level output = Level::Low;
  double delta = 1.0;
  double lambda = 1.0;
};

/// x^n / (K^n + x^n)
double hill_act(double x, double K, double n);
/// 1 / (1 + (x/K)^n)
double hill_rep(double x, double K, double n);

/// Dimensionless production term in [0, 1].
/// AND: product of activations; OR: (u+v)/(1+u+v) with u = (x1/K1)^n,
/// v = (x2/K2)^n; NOT: repression.
double gate_drive(const GateParams& g, std::span<const double> inputs);

/// Solution of dx/dt = α(K − x) from x0.
double closed_form(double K, double alpha, double x0, double t);

Level gate_truth(GateKind k, std::span<const Level> inputs);

/// Per-signal naming and thresholds for building row formulas.
struct GateSignals {
  std::vector<std::string> input_vars;
  std::vector<Thresholds> input_thresholds;
  std::string output_var;
  Thresholds output_thresholds;
};

struct TruthTableEntry {
  ExtendedTruthRow row;
  stl::Formula formula;
};

/// `x >= θ+` for high, `x <= θ−` for low.
stl::Formula level_atom(const std::string& var, const Thresholds& th, Level level);

/// G[0,λ+δ](input atoms)
stl::Formula row_antecedent(const ExtendedTruthRow& row, const GateSignals& io);
/// F[0,δ] G[0,λ](output atom)
stl::Formula row_consequent(const ExtendedTruthRow& row, const GateSignals& io);
/// antecedent -> consequent
stl::Formula row_formula(const ExtendedTruthRow& row, const GateSignals& io);

/// Rows in binary counting order with the first input most significant, i.e.
/// (low,low), (low,high), (high,low), (high,high) for two-input gates.
std::vector<TruthTableEntry> truth_table(GateKind kind, double delta, double lambda,
                                         const GateSignals& io);

} // namespace genesynth
