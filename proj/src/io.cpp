#include "genesynth/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace genesynth {

namespace {

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw IoError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw IoError(where + ": field '" + key + "' has the wrong type");
  }
}

Thresholds thresholds_from_json(const json& j, const std::string& where) {
  Thresholds t;
  t.plus = get<double>(j, "plus", where);
  t.minus = get<double>(j, "minus", where);
  if (j.contains("p"))
    t.margin = get<double>(j, "p", where);
  return t;
}

const char* level_name(Level l) { return l == Level::High ? "high" : "low"; }

} // namespace

std::string format_number(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Circuit circuit_from_json(const json& j) {
  if (!j.is_object())
    throw IoError("circuit file must hold a JSON object");
  std::vector<GateSpec> gates;
  for (const auto& g : get<json>(j, "gates", "circuit")) {
    GateSpec s;
    s.id = get<std::string>(g, "id", "gate");
    const std::string where = "gate '" + s.id + "'";
    try {
      s.kind = parse_gate_kind(get<std::string>(g, "kind", where));
    } catch (const std::invalid_argument& e) {
      throw IoError(where + ": " + e.what());
    }
    s.inputs = get<std::vector<std::string>>(g, "inputs", where);
    s.output = get<std::string>(g, "output", where);
    gates.push_back(std::move(s));
  }
  auto inputs = get<std::vector<std::string>>(j, "external_inputs", "circuit");
  std::vector<NetworkOutput> outputs;
  for (const auto& o : get<json>(j, "outputs", "circuit")) {
    NetworkOutput no;
    no.gate = get<std::string>(o, "gate", "output");
    no.name = o.contains("name") ? get<std::string>(o, "name", "output") : no.gate;
    outputs.push_back(std::move(no));
  }
  std::map<std::string, Thresholds> th;
  if (j.contains("thresholds"))
    for (const auto& [var, t] : j.at("thresholds").items())
      th[var] = thresholds_from_json(t, "thresholds of '" + var + "'");
  else
    th["*"] = Thresholds{};

  std::optional<TimingSpec> timing;
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    timing = TimingSpec{get<double>(t, "delta", "timing"), get<double>(t, "lambda", "timing")};
  }
  SimSpec sim;
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    if (s.contains("h"))
      sim.step = get<double>(s, "h", "sim");
    if (s.contains("horizon"))
      sim.horizon = get<double>(s, "horizon", "sim");
    if (s.contains("initial"))
      sim.initial = get<std::map<std::string, double>>(s, "initial", "sim");
  }
  return Circuit(std::move(gates), std::move(inputs), std::move(outputs), std::move(th), timing,
                 std::move(sim));
}

json circuit_to_json(const Circuit& c) {
  json j;
  j["gates"] = json::array();
  for (const auto& g : c.gates())
    j["gates"].push_back(
        {{"id", g.id}, {"kind", to_string(g.kind)}, {"inputs", g.inputs}, {"output", g.output}});
  j["external_inputs"] = c.external_inputs();
  j["outputs"] = json::array();
  for (const auto& o : c.outputs())
    j["outputs"].push_back({{"gate", o.gate}, {"name", o.name}});
  for (const auto& [var, t] : c.threshold_table())
    j["thresholds"][var] = {{"plus", t.plus}, {"minus", t.minus}, {"p", t.margin}};
  if (c.timing())
    j["timing"] = {{"delta", c.timing()->delta}, {"lambda", c.timing()->lambda}};
  const auto& s = c.sim();
  if (s.step || s.horizon || !s.initial.empty()) {
    json js = json::object();
    if (s.step)
      js["h"] = *s.step;
    if (s.horizon)
      js["horizon"] = *s.horizon;
    if (!s.initial.empty())
      js["initial"] = s.initial;
    j["sim"] = js;
  }
  return j;
}

Circuit load_circuit(const std::filesystem::path& path) {
  return circuit_from_json(read_json_file(path));
}

std::map<std::string, GateParams> params_from_json(const json& j, const Circuit& c) {
  const json gates = get<json>(j, "gates", "parameter file");
  std::map<std::string, GateParams> out;
  for (const auto& g : c.gates()) {
    if (!gates.contains(g.id))
      throw IoError("no parameters for gate '" + g.id + "'");
    const json& p = gates.at(g.id);
    const std::string where = "parameters of gate '" + g.id + "'";
    GateParams gp;
    gp.kind = g.kind;
    gp.n = get<double>(p, "n", where);
    gp.alpha = get<double>(p, "alpha", where);
    gp.hill_k = get<std::vector<double>>(p, "K", where);
    try {
      gp.validate();
    } catch (const std::invalid_argument& e) {
      throw IoError(where + ": " + e.what());
    }
    out.emplace(g.id, std::move(gp));
  }
  return out;
}

json params_to_json(const Circuit& c, const std::map<std::string, GateParams>& p) {
  json j;
  for (const auto& g : c.gates()) {
    const auto& gp = p.at(g.id);
    j["gates"][g.id] = {{"n", gp.n}, {"alpha", gp.alpha}, {"K", gp.hill_k}};
  }
  return j;
}

json to_json(const Interval& iv) {
  auto end = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"lo", end(iv.lo)}, {"hi", end(iv.hi)}};
}

json to_json(const ParamBox& box) {
  json j = json::object();
  for (const auto& [axis, iv] : box.axes())
    j[axis] = to_json(iv);
  return j;
}

json to_json(const TimingBudget& tb, const Circuit& c) {
  json j;
  j["delta"] = tb.network_delta;
  j["lambda"] = tb.network_lambda;
  j["gates"] = json::array();
  for (const auto& g : c.gates())
    j["gates"].push_back({{"id", g.id},
                          {"kind", to_string(g.kind)},
                          {"forward_path", tb.paths.forward.at(g.id)},
                          {"backward_path", tb.paths.backward.at(g.id)},
                          {"delta", tb.delta.at(g.id)},
                          {"lambda", tb.lambda.at(g.id)}});
  j["input_hold"] = tb.input_hold;
  return j;
}

json to_json(const SynthesisResult& r) {
  json j;
  j["method"] = r.method == Method::M1 ? "m1" : "m2";
  j["gates"] = json::array();
  for (const auto& g : r.gates) {
    json jg = {{"id", g.gate},
               {"kind", to_string(g.kind)},
               {"n", g.n},
               {"n_bound", g.n_bound},
               {"n_bound_strict", g.n_bound_strict},
               {"alpha_bound", g.alpha_bound},
               {"binding_rows", g.binding},
               {"k_axes", g.k_axes},
               {"box", to_json(g.box)}};
    if (g.region)
      jg["region"] = {{"kind", to_string(g.region->kind())},
                      {"n", g.region->n()},
                      {"box_is_outer_bound", true}};
    j["gates"].push_back(std::move(jg));
  }
  j["combined"] = to_json(r.combined());
  return j;
}

json to_json(const NumericSynthesis& r) {
  json j;
  j["gates"] = json::array();
  for (const auto& g : r.gates) {
    std::size_t count = 0;
    for (bool a : g.admissible)
      count += a;
    json jg = {{"id", g.gate},
               {"axes", g.axes},
               {"points", g.points.size()},
               {"admissible", count},
               {"status", g.status == NumericStatus::Ok ? "ok" : "no_admissible_point"}};
    if (g.best) {
      jg["bounding_box"] = to_json(g.bounding_box);
      jg["best"] = {{"point", g.points[*g.best]}, {"min_robustness", g.min_robustness[*g.best]}};
    }
    j["gates"].push_back(std::move(jg));
  }
  return j;
}

json to_json(const VerifyReport& r) {
  json j;
  j["passed"] = r.passed();
  j["min_robustness"] = r.rows.empty() ? json(nullptr) : json(r.min_robustness());
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    json in = json::object();
    for (const auto& [var, l] : row.inputs)
      in[var] = level_name(l);
    j["rows"].push_back({{"inputs", in},
                         {"output", row.output},
                         {"variable", row.var},
                         {"expected", level_name(row.expected)},
                         {"formula", stl::to_string(row.formula)},
                         {"robustness", row.robustness},
                         {"consequent_robustness", row.consequent_robustness},
                         {"passed", row.passed()}});
  }
  return j;
}

} // namespace genesynth
