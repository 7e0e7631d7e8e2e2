#include "genesynth/netgraph.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace genesynth {

namespace {

std::string join_cycle(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    out += (i ? " -> " : "") + ids[i];
  return out;
}

} // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : GraphError("circuit has a cycle: " + join_cycle(cycle)), cycle_(std::move(cycle)) {}

Circuit::Circuit(std::vector<GateSpec> gates, std::vector<std::string> external_inputs,
                 std::vector<NetworkOutput> outputs, std::map<std::string, Thresholds> thresholds,
                 std::optional<TimingSpec> timing, SimSpec sim)
    : gates_(std::move(gates)), inputs_(std::move(external_inputs)), outputs_(std::move(outputs)),
      thresholds_(std::move(thresholds)), timing_(timing), sim_(std::move(sim)) {
  if (gates_.empty())
    throw GraphError("circuit has no gates");
  if (inputs_.empty())
    throw GraphError("circuit has no external inputs");
  if (outputs_.empty())
    throw GraphError("circuit has no network outputs");

  std::set<std::string> vars(inputs_.begin(), inputs_.end());
  if (vars.size() != inputs_.size())
    throw GraphError("duplicate external input");
  std::set<std::string> ids;
  for (const auto& g : gates_) {
    if (g.id.empty())
      throw GraphError("gate with empty id");
    if (!ids.insert(g.id).second)
      throw GraphError("duplicate gate id '" + g.id + "'");
    if (!vars.insert(g.output).second)
      throw GraphError("variable '" + g.output + "' is defined twice");
  }
  for (const auto& g : gates_) {
    if (static_cast<int>(g.inputs.size()) != arity(g.kind))
      throw GraphError("gate '" + g.id + "' (" + std::string(to_string(g.kind)) + ") needs " +
                       std::to_string(arity(g.kind)) + " inputs, has " +
                       std::to_string(g.inputs.size()));
    for (const auto& in : g.inputs)
      if (!vars.count(in))
        throw GraphError("gate '" + g.id + "' reads undefined variable '" + in + "'");
  }
  std::set<std::string> names;
  for (const auto& o : outputs_) {
    if (!ids.count(o.gate))
      throw GraphError("network output '" + o.name + "' refers to unknown gate '" + o.gate + "'");
    if (!names.insert(o.name).second)
      throw GraphError("duplicate network output name '" + o.name + "'");
  }
  for (const auto& v : vars) {
    try {
      this->thresholds(v).validate();
    } catch (const std::invalid_argument& e) {
      throw GraphError("thresholds of '" + v + "': " + e.what());
    }
  }
  if (timing_ && (!(timing_->delta > 0.0) || !(timing_->lambda > 0.0)))
    throw GraphError("timing delta and lambda must be > 0");
}

std::size_t Circuit::gate_index(const std::string& id) const {
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (gates_[i].id == id)
      return i;
  throw GraphError("unknown gate '" + id + "'");
}

const Thresholds& Circuit::thresholds(const std::string& var) const {
  auto it = thresholds_.find(var);
  if (it == thresholds_.end())
    it = thresholds_.find("*");
  if (it == thresholds_.end())
    throw GraphError("no thresholds for variable '" + var + "'");
  return it->second;
}

bool Circuit::is_external(const std::string& var) const {
  return std::find(inputs_.begin(), inputs_.end(), var) != inputs_.end();
}

std::optional<std::size_t> Circuit::producer_of(const std::string& var) const {
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (gates_[i].output == var)
      return i;
  return std::nullopt;
}

std::vector<std::size_t> Circuit::consumers(std::size_t g) const {
  std::vector<std::size_t> out;
  const auto& var = gates_.at(g).output;
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (std::find(gates_[i].inputs.begin(), gates_[i].inputs.end(), var) != gates_[i].inputs.end())
      out.push_back(i);
  return out;
}

std::vector<std::size_t> Circuit::readers_of(const std::string& var) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (std::find(gates_[i].inputs.begin(), gates_[i].inputs.end(), var) != gates_[i].inputs.end())
      out.push_back(i);
  return out;
}

bool Circuit::is_output_gate(std::size_t g) const {
  const auto& id = gates_.at(g).id;
  return std::any_of(outputs_.begin(), outputs_.end(),
                     [&](const NetworkOutput& o) { return o.gate == id; });
}

bool Circuit::reads_external(std::size_t g) const {
  const auto& in = gates_.at(g).inputs;
  return std::any_of(in.begin(), in.end(), [&](const std::string& v) { return is_external(v); });
}

std::vector<std::size_t> Circuit::topological_order() const {
  const std::size_t n = gates_.size();
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> seen;
    for (const auto& in : gates_[i].inputs)
      if (auto p = producer_of(in); p && seen.insert(*p).second) {
        preds[i].push_back(*p);
        ++indeg[i];
      }
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0)
      ready.insert(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t g = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(g);
    for (std::size_t c : consumers(g))
      if (--indeg[c] == 0)
        ready.insert(c);
  }
  if (order.size() == n)
    return order;

  // Walk predecessors inside the leftover set until a gate repeats.
  std::vector<bool> left(n, false);
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] > 0) {
      left[i] = true;
      if (start == n)
        start = i;
    }
  std::vector<std::size_t> walk;
  std::vector<int> pos(n, -1);
  std::size_t cur = start;
  while (pos[cur] < 0) {
    pos[cur] = static_cast<int>(walk.size());
    walk.push_back(cur);
    for (std::size_t p : preds[cur])
      if (left[p]) {
        cur = p;
        break;
      }
  }
  std::vector<std::string> cycle;
  for (std::size_t i = walk.size(); i-- > static_cast<std::size_t>(pos[cur]);)
    cycle.push_back(gates_[walk[i]].id);
  cycle.push_back(cycle.front());
  throw CycleError(std::move(cycle));
}

std::vector<Edge> Circuit::internal_edges() const {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < gates_.size(); ++i)
    for (std::size_t c : consumers(i))
      edges.push_back({gates_[i].id, gates_[c].id, gates_[i].output});
  return edges;
}

GateSignals Circuit::signals(std::size_t g) const {
  const auto& spec = gates_.at(g);
  GateSignals io;
  io.input_vars = spec.inputs;
  for (const auto& v : spec.inputs)
    io.input_thresholds.push_back(thresholds(v));
  io.output_var = spec.output;
  io.output_thresholds = thresholds(spec.output);
  return io;
}

LongestPaths longest_paths(const Circuit& c) {
  const auto order = c.topological_order();
  const auto& gates = c.gates();
  std::vector<int> fwd(gates.size(), -1), bwd(gates.size(), -1);

  for (std::size_t g : order) {
    int v = c.reads_external(g) ? 0 : -1;
    for (const auto& in : gates[g].inputs)
      if (auto p = c.producer_of(in))
        v = std::max(v, bwd[*p] + 1);
    bwd[g] = v;
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t g = *it;
    int v = c.is_output_gate(g) ? 0 : -1;
    for (std::size_t m : c.consumers(g))
      if (fwd[m] >= 0)
        v = std::max(v, fwd[m] + 1);
    if (v < 0)
      throw GraphError("gate '" + gates[g].id + "' does not drive any network output");
    fwd[g] = v;
  }

  LongestPaths lp;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    lp.forward[gates[g].id] = fwd[g];
    lp.backward[gates[g].id] = bwd[g];
  }
  return lp;
}

TimingBudget propagate_timing(const Circuit& c, double delta, double lambda) {
  if (!(delta > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("network delta and lambda must be > 0");
  TimingBudget tb;
  tb.network_delta = delta;
  tb.network_lambda = lambda;
  tb.paths = longest_paths(c);
  const auto& gates = c.gates();

  for (const auto& g : gates)
    tb.delta[g.id] = delta / (tb.paths.forward[g.id] + tb.paths.backward[g.id] + 1);

  const auto order = c.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t g = *it;
    const auto& id = gates[g].id;
    double need = c.is_output_gate(g) ? lambda : 0.0;
    for (std::size_t m : c.consumers(g)) {
      const auto& cid = gates[m].id;
      need = std::max(need, tb.lambda[cid] + std::max(tb.delta[id], tb.delta[cid]));
    }
    tb.lambda[id] = need;
  }

  for (const auto& in : c.external_inputs()) {
    double hold = 0.0;
    for (std::size_t m : c.readers_of(in))
      hold = std::max(hold, tb.lambda[gates[m].id] + tb.delta[gates[m].id]);
    tb.input_hold[in] = hold;
  }
  return tb;
}

stl::Formula WiringCheck::formula() const {
  auto high = [&] { return stl::ge(var, threshold); };
  return stl::implies(stl::eventually(nu1, nu1 + gamma1, stl::globally(0.0, mu1, high())),
                      stl::globally(nu2, nu2 + mu2, high()));
}

WiringCheck make_wiring_check(const std::string& var, double threshold, double producer_delta,
                              double producer_lambda, double consumer_lambda, double nu1) {
  WiringCheck w;
  w.var = var;
  w.threshold = threshold;
  w.nu1 = nu1;
  w.gamma1 = producer_delta;
  w.mu1 = producer_lambda + producer_delta;
  w.nu2 = nu1 + producer_delta;
  w.mu2 = consumer_lambda;
  return w;
}

std::vector<WiringFormula> wiring_formulas(const Circuit& c, const TimingBudget& tb) {
  std::vector<WiringFormula> out;
  for (auto& e : c.internal_edges()) {
    auto check = make_wiring_check(e.var, c.thresholds(e.var).plus, tb.delta.at(e.producer),
                                   tb.lambda.at(e.producer), tb.lambda.at(e.consumer));
    stl::Formula f = check.formula();
    out.push_back({std::move(e), std::move(check), std::move(f)});
  }
  return out;
}

std::map<std::string, Level> evaluate_boolean(const Circuit& c,
                                              const std::map<std::string, Level>& inputs) {
  std::map<std::string, Level> val;
  for (const auto& in : c.external_inputs()) {
    auto it = inputs.find(in);
    if (it == inputs.end())
      throw GraphError("no level given for external input '" + in + "'");
    val[in] = it->second;
  }
  for (std::size_t g : c.topological_order()) {
    const auto& spec = c.gates()[g];
    std::vector<Level> in;
    for (const auto& v : spec.inputs)
      in.push_back(val.at(v));
    val[spec.output] = gate_truth(spec.kind, in);
  }
  return val;
}

} // namespace genesynth
