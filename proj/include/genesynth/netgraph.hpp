#pragma once

#include "genesynth/gatelib.hpp"
#include "genesynth/stl.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace genesynth {

class GraphError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CycleError : public GraphError {
public:
  explicit CycleError(std::vector<std::string> cycle);
  /// Gate ids along the cycle; the first id is repeated at the end.
  const std::vector<std::string>& cycle() const { return cycle_; }

private:
  std::vector<std::string> cycle_;
};

struct GateSpec {
  std::string id;
  GateKind kind = GateKind::And;
  std::vector<std::string> inputs; // variable names
  std::string output;              // variable name
};

struct NetworkOutput {
  std::string gate;
  std::string name;
};

struct TimingSpec {
  double delta = 0.0;
  double lambda = 0.0;
};

struct SimSpec {
  std::optional<double> step;
  std::optional<double> horizon;
  std::map<std::string, double> initial;
};

/// Wire from one gate's output to another gate's input.
struct Edge {
  std::string producer;
  std::string consumer;
  std::string var;
};

/// Network of gates over named variables. Every gate input is an external
/// input or another gate's output. Structure is validated on construction;
/// acyclicity is checked by the analyses so that a cyclic file can still be
/// loaded and its cycle reported.
class Circuit {
public:
  Circuit(std::vector<GateSpec> gates, std::vector<std::string> external_inputs,
          std::vector<NetworkOutput> outputs, std::map<std::string, Thresholds> thresholds,
          std::optional<TimingSpec> timing = std::nullopt, SimSpec sim = {});

  const std::vector<GateSpec>& gates() const { return gates_; }
  const std::vector<std::string>& external_inputs() const { return inputs_; }
  const std::vector<NetworkOutput>& outputs() const { return outputs_; }
  const std::optional<TimingSpec>& timing() const { return timing_; }
  const SimSpec& sim() const { return sim_; }

  std::size_t gate_index(const std::string& id) const;
  const GateSpec& gate(const std::string& id) const { return gates_[gate_index(id)]; }

  /// Thresholds for a variable; the key "*" acts as a default.
  const Thresholds& thresholds(const std::string& var) const;
  const std::map<std::string, Thresholds>& threshold_table() const { return thresholds_; }

  bool is_external(const std::string& var) const;
  std::optional<std::size_t> producer_of(const std::string& var) const;
  /// Gates that read the output of gate `g`, in gate order, without repeats.
  std::vector<std::size_t> consumers(std::size_t g) const;
  /// Gates that read external input `var`.
  std::vector<std::size_t> readers_of(const std::string& var) const;
  bool is_output_gate(std::size_t g) const;
  bool reads_external(std::size_t g) const;

  /// Kahn ordering; ties broken by gate order. Throws CycleError.
  std::vector<std::size_t> topological_order() const;

  std::vector<Edge> internal_edges() const;

  GateSignals signals(std::size_t g) const;

private:
  std::vector<GateSpec> gates_;
  std::vector<std::string> inputs_;
  std::vector<NetworkOutput> outputs_;
  std::map<std::string, Thresholds> thresholds_;
  std::optional<TimingSpec> timing_;
  SimSpec sim_;
};

struct LongestPaths {
  std::map<std::string, int> forward;  // edges to the farthest output gate
  std::map<std::string, int> backward; // edges back to the farthest input gate
};

LongestPaths longest_paths(const Circuit& c);

struct TimingBudget {
  double network_delta = 0.0;
  double network_lambda = 0.0;
  std::map<std::string, double> delta;      // per gate
  std::map<std::string, double> lambda;     // per gate
  std::map<std::string, double> input_hold; // per external input
  LongestPaths paths;
};

/// Per-gate budgets: δ(M) = δ / (ℓ_f + ℓ_b + 1); output gates must hold for λ;
/// a producer must hold long enough for each consumer's response window plus
/// its duration: λ(M) = max over consumers M′ of λ(M′) + max(δ(M), δ(M′)).
/// External inputs must be held for max over readers of λ(M′) + δ(M′).
TimingBudget propagate_timing(const Circuit& c, double delta, double lambda);

/// F[ν1, ν1+γ1] G[0, μ1](x >= θ) -> G[ν2, ν2+μ2](x >= θ)
struct WiringCheck {
  double nu1 = 0.0;
  double gamma1 = 0.0;
  double mu1 = 0.0;
  double nu2 = 0.0;
  double mu2 = 0.0;
  std::string var;
  double threshold = 0.0;

  stl::Formula formula() const;
};

/// Instance with μ1 = λ+δ, μ2 = λ, γ1 = δ, ν2 = ν1+δ.
WiringCheck make_wiring_check(const std::string& var, double threshold, double producer_delta,
                              double producer_lambda, double consumer_lambda, double nu1 = 0.0);

struct WiringFormula {
  Edge edge;
  WiringCheck check;
  stl::Formula formula;
};

/// One wiring formula per internal edge, in edge order.
std::vector<WiringFormula> wiring_formulas(const Circuit& c, const TimingBudget& tb);

/// Boolean value of every variable (inputs and gate outputs) for one input
/// combination.
std::map<std::string, Level> evaluate_boolean(const Circuit& c,
                                              const std::map<std::string, Level>& inputs);

} // namespace genesynth
