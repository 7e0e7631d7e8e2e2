#include "cli.hpp"

#include "genesynth/io.hpp"
#include "genesynth/netgraph.hpp"
#include "genesynth/odesim.hpp"
#include "genesynth/stl.hpp"
#include "genesynth/synth.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#ifndef GENESYNTH_VERSION
#define GENESYNTH_VERSION "0.0.0"
#endif

namespace genesynth::cli {

namespace fs = std::filesystem;

namespace {

// Terminal output: 6 significant digits. Files keep full precision.
std::string show(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

struct Options {
  std::string circuit;
  std::string params;
  std::string trace;
  std::string formula;
  std::string out;
  std::string method = "m1";
  std::string kind;
  std::vector<std::string> n_choice;
  std::optional<double> delta, lambda, step, horizon, alpha;
  double time = 0.0;
  double plus = 0.75, minus = 0.25, margin = 0.1;
  double n = 4.0;
  std::size_t grid = 50;
  double region_delta = 4.0, region_lambda = 12.0;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto r = std::from_chars(text.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw IoError("invalid number '" + text + "' for " + what);
  return v;
}

HillChoice parse_hill(const std::vector<std::string>& items) {
  HillChoice out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw IoError("--n expects KEY=VALUE, got '" + item + "'");
    std::string key = item.substr(0, eq);
    try {
      key = std::string(to_string(parse_gate_kind(key)));
    } catch (const std::invalid_argument&) {
      // a gate id
    }
    out[key] = parse_double(item.substr(eq + 1), "--n " + key);
  }
  return out;
}

TimingBudget timing_for(const Circuit& c, const Options& o) {
  std::optional<double> d = o.delta, l = o.lambda;
  if (c.timing()) {
    if (!d)
      d = c.timing()->delta;
    if (!l)
      l = c.timing()->lambda;
  }
  if (!d || !l)
    throw IoError("network delta and lambda are needed: add a timing block or pass --delta and --lambda");
  if (!(*d > 0.0) || !(*l > 0.0))
    throw IoError("delta and lambda must be > 0");
  return propagate_timing(c, *d, *l);
}

Thresholds cli_thresholds(const Options& o) {
  Thresholds t{o.plus, o.minus, o.margin};
  try {
    t.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  return t;
}

class Output {
public:
  explicit Output(const std::string& dir) : dir_(dir) {
    if (!dir_.empty())
      fs::create_directories(dir_);
  }
  bool enabled() const { return !dir_.empty(); }
  fs::path path(const std::string& name) const { return fs::path(dir_) / name; }

  void json_file(const std::string& name, const json& j) {
    write_json_file(path(name), j);
    written_.push_back(name);
  }
  std::ofstream text_file(const std::string& name) {
    std::ofstream f(path(name));
    if (!f)
      throw IoError("cannot write '" + path(name).string() + "'");
    written_.push_back(name);
    return f;
  }
  void manifest(const std::string& command, const Options& o,
                const std::vector<std::string>& args, const json& resolved) {
    if (!enabled())
      return;
    json m = {{"tool", "genesynth"},
              {"version", GENESYNTH_VERSION},
              {"command", command},
              {"circuit", o.circuit.empty() ? json(nullptr) : json(o.circuit)},
              {"arguments", args},
              {"options", resolved},
              {"output_directory", dir_},
              {"outputs", written_},
              {"timestamp", timestamp()}};
    write_json_file(path("manifest.json"), m);
  }

private:
  std::string dir_;
  std::vector<std::string> written_;
};

std::string levels_tag(const std::map<std::string, Level>& levels,
                       const std::vector<std::string>& order) {
  std::string s;
  for (const auto& v : order)
    s += (s.empty() ? "" : "_") + v + (levels.at(v) == Level::High ? "1" : "0");
  return s;
}

int cmd_timing(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const Circuit c = load_circuit(o.circuit);
  const TimingBudget tb = timing_for(c, o);
  out << "network delta " << show(tb.network_delta) << ", lambda "
      << show(tb.network_lambda) << "\n";
  out << std::left << std::setw(8) << "gate" << std::setw(6) << "kind" << std::setw(6) << "l_f"
      << std::setw(6) << "l_b" << std::setw(12) << "delta" << "lambda\n";
  for (const auto& g : c.gates())
    out << std::setw(8) << g.id << std::setw(6) << to_string(g.kind) << std::setw(6)
        << tb.paths.forward.at(g.id) << std::setw(6) << tb.paths.backward.at(g.id)
        << std::setw(12) << show(tb.delta.at(g.id)) << show(tb.lambda.at(g.id))
        << "\n";
  for (const auto& [in, hold] : tb.input_hold)
    out << "input " << in << " hold " << show(hold) << "\n";

  Output files(o.out);
  if (files.enabled())
    files.json_file("timing.json", to_json(tb, c));
  files.manifest("timing", o, args,
                 {{"delta", tb.network_delta}, {"lambda", tb.network_lambda}});
  return kOk;
}

int cmd_synth(const Options& o, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  const Circuit c = load_circuit(o.circuit);
  const TimingBudget tb = timing_for(c, o);
  const HillChoice hill = parse_hill(o.n_choice);
  Output files(o.out);
  json resolved = {{"method", o.method}, {"delta", tb.network_delta},
                   {"lambda", tb.network_lambda}, {"n", hill}};

  if (o.method == "numeric") {
    if (o.grid == 0)
      throw IoError("--grid must be >= 1");
    NumericOptions no;
    no.step = o.step.value_or(c.sim().step.value_or(0.01));
    const double lo = 0.5 / static_cast<double>(o.grid);
    for (const auto& g : c.gates()) {
      double n = 0.0;
      if (auto it = hill.find(g.id); it != hill.end())
        n = it->second;
      else if (auto it2 = hill.find(std::string(to_string(g.kind))); it2 != hill.end())
        n = it2->second;
      else
        throw IoError("no Hill coefficient given for gate '" + g.id + "'");
      for (const auto& in : g.inputs)
        no.axes["K_" + in + "_" + g.output] = {lo, 1.0 - lo, o.grid};
      no.axes["n_" + g.output] = {n, n, 1};
    }
    resolved["grid"] = o.grid;
    resolved["step"] = no.step;
    const NumericSynthesis ns = synthesize_numeric(c, tb, no);
    json j = to_json(ns);
    for (const auto& g : ns.gates) {
      std::size_t count = 0;
      for (bool a : g.admissible)
        count += a;
      out << g.gate << ": " << count << " of " << g.points.size() << " grid points admissible";
      if (g.best)
        out << ", best min robustness " << show(g.min_robustness[*g.best]);
      out << "\n";
    }
    if (files.enabled())
      files.json_file("synthesis.json", j);
    files.manifest("synth", o, args, resolved);
    if (!ns.ok()) {
      for (const auto& g : ns.gates)
        if (g.status == NumericStatus::NoAdmissiblePoint)
          err << "no admissible grid point for gate '" << g.gate
              << "' (grid may be too coarse)\n";
      return kEmptyRegion;
    }
    return kOk;
  }

  Method method;
  if (o.method == "m1")
    method = Method::M1;
  else if (o.method == "m2")
    method = Method::M2;
  else
    throw IoError("--method must be m1, m2 or numeric");

  const SynthesisResult r = synthesize_circuit(c, tb, method, hill);
  json j = to_json(r);
  for (std::size_t i = 0; i < r.gates.size(); ++i) {
    const auto& g = r.gates[i];
    out << g.gate << " (" << to_string(g.kind) << "): n = " << show(g.n) << " (bound "
        << (g.n_bound_strict ? ">" : ">=") << " " << show(g.n_bound) << "), alpha >= "
        << show(g.alpha_bound);
    for (const auto& axis : g.k_axes) {
      const Interval& iv = g.box.at(axis);
      out << ", " << show(iv.lo) << " <= " << axis << " <= " << show(iv.hi);
    }
    if (g.region)
      out << " (outer rectangle of the curved region)";
    out << "\n";

    if (method == Method::M2 && files.enabled()) {
      const auto idx = c.gate_index(g.gate);
      const GateSignals io = c.signals(idx);
      RegionGrid spec;
      spec.kind = g.kind;
      spec.inputs = io.input_thresholds;
      spec.output = io.output_thresholds;
      spec.n = g.n;
      spec.method = Method::M2;
      spec.resolution = o.grid;
      spec.alpha = g.alpha_bound;
      spec.delta = tb.delta.at(g.gate);
      spec.lambda = tb.lambda.at(g.gate);
      const std::string name = "region_" + g.gate + ".csv";
      auto f = files.text_file(name);
      write_region_csv(f, region_grid(spec));
      j["gates"][i]["region_csv"] = files.path(name).string();
    }
  }
  if (files.enabled())
    files.json_file("synthesis.json", j);
  files.manifest("synth", o, args, resolved);
  return kOk;
}

int cmd_region(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  RegionGrid spec;
  try {
    spec.kind = parse_gate_kind(o.kind);
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
  const Thresholds th = cli_thresholds(o);
  spec.inputs.assign(static_cast<std::size_t>(arity(spec.kind)), th);
  spec.output = th;
  spec.n = o.n;
  if (o.method == "m1")
    spec.method = Method::M1;
  else if (o.method == "m2")
    spec.method = Method::M2;
  else
    throw IoError("--method must be m1 or m2");
  if (o.grid == 0)
    throw IoError("--grid must be >= 1");
  if (!(o.n > 0.0))
    throw IoError("--n must be > 0");
  spec.resolution = o.grid;
  spec.delta = o.region_delta;
  spec.lambda = o.region_lambda;
  if (!(spec.delta > 0.0) || !(spec.lambda > 0.0))
    throw IoError("--delta and --lambda must be > 0");
  spec.alpha = o.alpha.value_or(alpha_bound(th, spec.delta));
  if (!(spec.alpha > 0.0))
    throw IoError("--alpha must be > 0");

  const auto points = region_grid(spec);
  Output files(o.out);
  if (files.enabled()) {
    auto f = files.text_file("region.csv");
    write_region_csv(f, points);
    std::size_t inside = 0;
    for (const auto& p : points)
      inside += p.membership.inside;
    out << inside << " of " << points.size() << " grid points inside, written to "
        << files.path("region.csv").string() << "\n";
  } else {
    write_region_csv(out, points);
  }
  files.manifest("region", o, args,
                 {{"kind", to_string(spec.kind)},
                  {"plus", th.plus},
                  {"minus", th.minus},
                  {"p", th.margin},
                  {"n", spec.n},
                  {"method", o.method},
                  {"grid", spec.resolution},
                  {"alpha", spec.alpha},
                  {"delta", spec.delta},
                  {"lambda", spec.lambda}});
  return kOk;
}

int cmd_verify(const Options& o, const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  const Circuit c = load_circuit(o.circuit);
  const auto params = params_from_json(read_json_file(o.params), c);
  const TimingBudget tb = timing_for(c, o);
  VerifyOptions vo;
  vo.step = o.step.value_or(c.sim().step.value_or(0.01));
  vo.horizon = o.horizon ? o.horizon : c.sim().horizon;
  vo.initial = c.sim().initial;
  const VerifyReport rep = verify(c, params, tb, vo);

  for (const auto& row : rep.rows) {
    out << (row.passed() ? "PASS " : "FAIL ") << row.output << " ("
        << levels_tag(row.inputs, c.external_inputs()) << " -> "
        << (row.expected == Level::High ? "high" : "low")
        << ") robustness " << show(row.robustness) << "\n";
  }
  Output files(o.out);
  if (files.enabled()) {
    json j = to_json(rep);
    j["traces"] = json::array();
    for (std::size_t i = 0; i < rep.traces.size(); ++i) {
      const std::string name = "trace_" + levels_tag(rep.combinations[i], c.external_inputs()) + ".csv";
      auto f = files.text_file(name);
      write_csv(f, rep.traces[i]);
      j["traces"].push_back(files.path(name).string());
    }
    files.json_file("verify.json", j);
  }
  files.manifest("verify", o, args,
                 {{"params", o.params},
                  {"delta", tb.network_delta},
                  {"lambda", tb.network_lambda},
                  {"step", vo.step},
                  {"horizon", vo.horizon.value_or(tb.network_delta + tb.network_lambda)}});
  if (!rep.passed()) {
    for (const auto& row : rep.rows)
      if (!row.passed())
        err << "verification failed: output " << row.output << " with inputs "
            << levels_tag(row.inputs, c.external_inputs()) << " has robustness "
            << show(row.robustness) << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

int cmd_monitor(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  std::ifstream in(o.trace);
  if (!in)
    throw IoError("cannot open '" + o.trace + "'");
  const Signal s = read_csv(in);
  const stl::Formula f = stl::parse(o.formula);
  const stl::Robustness r = stl::robustness(f, s, o.time);
  out << format_number(r.value) << "\n";
  Output files(o.out);
  if (files.enabled())
    files.json_file("monitor.json", {{"formula", stl::to_string(f)},
                                     {"time", o.time},
                                     {"robustness", r.value},
                                     {"satisfied", r.satisfied()},
                                     {"marginal", r.marginal()}});
  files.manifest("monitor", o, args, {{"trace", o.trace}, {"formula", o.formula}, {"time", o.time}});
  return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parameter synthesis and verification for genetic logic gates", "genesynth"};
  app.set_version_flag("--version", GENESYNTH_VERSION);
  app.require_subcommand(1);
  Options o;

  auto timing_opts = [&](CLI::App* sc) {
    sc->add_option("--delta", o.delta, "Network response time (overrides the circuit file)");
    sc->add_option("--lambda", o.lambda, "Network output duration (overrides the circuit file)");
  };
  auto sim_opts = [&](CLI::App* sc) {
    sc->add_option("--step", o.step, "Integrator step");
    sc->add_option("--horizon", o.horizon, "Simulation horizon");
  };

  auto* timing = app.add_subcommand("timing", "Per-gate timing budgets");
  timing->add_option("circuit", o.circuit, "Circuit JSON file")->required();
  timing_opts(timing);
  timing->add_option("--out", o.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Analytic or grid-based parameter synthesis");
  synth->add_option("circuit", o.circuit, "Circuit JSON file")->required();
  synth->add_option("--method", o.method, "m1, m2 or numeric")
      ->check(CLI::IsMember({"m1", "m2", "numeric"}));
  synth->add_option("--n", o.n_choice, "Hill coefficient per gate id or kind, KEY=VALUE")
      ->required();
  synth->add_option("--grid", o.grid, "Grid resolution per K axis (m2 export, numeric)");
  timing_opts(synth);
  sim_opts(synth);
  synth->add_option("--out", o.out, "Output directory");

  auto* region = app.add_subcommand("region", "Sample one gate's K region to CSV");
  region->add_option("--kind", o.kind, "AND, OR or NOT")->required();
  region->add_option("--plus", o.plus, "Activation threshold");
  region->add_option("--minus", o.minus, "Deactivation threshold");
  region->add_option("--p", o.margin, "Threshold margin");
  region->add_option("--n", o.n, "Hill coefficient");
  region->add_option("--grid", o.grid, "Points per axis");
  region->add_option("--method", o.method, "m1 or m2")->check(CLI::IsMember({"m1", "m2"}));
  region->add_option("--delta", o.region_delta, "Gate response time");
  region->add_option("--lambda", o.region_lambda, "Gate output duration");
  region->add_option("--alpha", o.alpha, "Degradation rate (default: its lower bound)");
  region->add_option("--out", o.out, "Output directory");

  auto* ver = app.add_subcommand("verify", "Simulate the circuit and monitor its truth table");
  ver->add_option("circuit", o.circuit, "Circuit JSON file")->required();
  ver->add_option("params", o.params, "Parameter JSON file")->required();
  timing_opts(ver);
  sim_opts(ver);
  ver->add_option("--out", o.out, "Output directory");

  auto* mon = app.add_subcommand("monitor", "Robustness of a formula on a trace CSV");
  mon->add_option("trace", o.trace, "Trace CSV file")->required();
  mon->add_option("formula", o.formula, "STL formula")->required();
  mon->add_option("--time", o.time, "Evaluation time");
  mon->add_option("--out", o.out, "Output directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  if (region->parsed() && !region->count("--method"))
    o.method = "m2";

  try {
    if (timing->parsed())
      return cmd_timing(o, args, out);
    if (synth->parsed())
      return cmd_synth(o, args, out, err);
    if (region->parsed())
      return cmd_region(o, args, out);
    if (ver->parsed())
      return cmd_verify(o, args, out, err);
    return cmd_monitor(o, args, out);
  } catch (const EmptyRegionError& e) {
    err << "error: " << e.what() << "\n";
    return kEmptyRegion;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    if (auto* ce = dynamic_cast<const CycleError*>(&e)) {
      err << "cycle:";
      for (const auto& id : ce->cycle())
        err << ' ' << id;
      err << "\n";
    }
    return kGraphError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

} // namespace genesynth::cli
