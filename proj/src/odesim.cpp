#include "genesynth/odesim.hpp"

#include <algorithm>
#include <cmath>

namespace genesynth {

Schedule::Schedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty())
    throw SimError("schedule needs at least one segment");
  if (std::abs(segments_.front().start) > kTimeEps)
    throw SimError("schedule must start at t = 0");
  for (std::size_t i = 1; i < segments_.size(); ++i)
    if (!(segments_[i].start > segments_[i - 1].start))
      throw SimError("schedule segment starts must be strictly increasing");
  for (const auto& s : segments_)
    if (!std::isfinite(s.level))
      throw SimError("schedule level must be finite");
}

double Schedule::at(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t + kTimeEps,
                             [](double v, const Segment& s) { return v < s.start; });
  return it == segments_.begin() ? segments_.front().level : std::prev(it)->level;
}

InputSource::InputSource(Schedule s) : schedule_(std::move(s)) {}
InputSource::InputSource(std::function<double(double)> f) : fn_(std::move(f)) {}

double InputSource::eval(double t, const Step& step) const {
  return schedule_ ? schedule_->at(0.5 * (step.t0 + step.t1)) : fn_(t);
}

double InputSource::sample(double t) const { return schedule_ ? schedule_->at(t) : fn_(t); }

void SimConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step))
    throw SimError("integrator step must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw SimError("simulation horizon must be > 0");
  for (const auto& [var, x0] : initial)
    if (!(x0 >= 0.0 && x0 <= 1.0))
      throw SimError("initial value of '" + var + "' must lie in [0, 1]");
}

std::vector<std::vector<double>> integrate_rk4(const OdeRhs& f, std::vector<double> x,
                                               std::span<const double> grid) {
  const std::size_t d = x.size();
  std::vector<std::vector<double>> out;
  out.reserve(grid.size());
  out.push_back(x);
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double t = grid[i - 1];
    const double h = grid[i] - t;
    const Step st{t, grid[i]};
    f(t, st, x, k1);
    for (std::size_t j = 0; j < d; ++j)
      tmp[j] = x[j] + 0.5 * h * k1[j];
    f(t + 0.5 * h, st, tmp, k2);
    for (std::size_t j = 0; j < d; ++j)
      tmp[j] = x[j] + 0.5 * h * k2[j];
    f(t + 0.5 * h, st, tmp, k3);
    for (std::size_t j = 0; j < d; ++j)
      tmp[j] = x[j] + h * k3[j];
    f(grid[i], st, tmp, k4);
    for (std::size_t j = 0; j < d; ++j)
      x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    out.push_back(x);
  }
  return out;
}

namespace {

std::vector<std::string> default_input_names(std::size_t k, std::vector<std::string> names) {
  if (names.empty())
    for (std::size_t i = 0; i < k; ++i)
      names.push_back("u" + std::to_string(i + 1));
  if (names.size() != k)
    throw SimError("input name count does not match gate arity");
  return names;
}

} // namespace

Signal simulate_gate(const GateParams& g, const std::vector<InputSource>& inputs, double x0,
                     const SimConfig& cfg, std::vector<std::string> input_vars,
                     const std::string& output_var) {
  g.validate();
  cfg.validate();
  const std::size_t k = static_cast<std::size_t>(arity(g.kind));
  if (inputs.size() != k)
    throw SimError("gate needs " + std::to_string(k) + " inputs");
  if (!(x0 >= 0.0 && x0 <= 1.0))
    throw SimError("initial output must lie in [0, 1]");
  input_vars = default_input_names(k, std::move(input_vars));

  const auto grid = uniform_grid(cfg.horizon, cfg.step);
  std::vector<double> u(k);
  auto rhs = [&](double t, const Step& st, std::span<const double> x, std::span<double> dx) {
    for (std::size_t i = 0; i < k; ++i)
      u[i] = inputs[i].eval(t, st);
    dx[0] = g.alpha * (gate_drive(g, u) - x[0]);
  };
  const auto states = integrate_rk4(rhs, {x0}, grid);

  std::vector<std::vector<double>> cols(k + 1, std::vector<double>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i)
      cols[i][j] = inputs[i].sample(grid[j]);
    cols[k][j] = states[j][0];
  }
  auto names = input_vars;
  names.push_back(output_var);
  return Signal(grid, std::move(names), std::move(cols));
}

Signal simulate_gate(const GateParams& g, std::span<const ConstantStimulus> inputs, double x0,
                     const SimConfig& cfg, std::vector<std::string> input_vars,
                     const std::string& output_var) {
  std::vector<InputSource> src;
  for (const auto& s : inputs) {
    s.validate();
    if (s.hold_duration < cfg.horizon - kTimeEps)
      throw SimError("constant stimulus must be held for the whole horizon");
    src.emplace_back(Schedule::constant(s.level));
  }
  return simulate_gate(g, src, x0, cfg, std::move(input_vars), output_var);
}

Signal simulate_circuit(const Circuit& c, const std::map<std::string, GateParams>& params,
                        const SimConfig& cfg) {
  cfg.validate();
  const auto& gates = c.gates();
  const std::size_t m = gates.size();
  const auto& ext = c.external_inputs();

  std::vector<const GateParams*> p(m);
  for (std::size_t g = 0; g < m; ++g) {
    auto it = params.find(gates[g].id);
    if (it == params.end())
      throw SimError("no parameters for gate '" + gates[g].id + "'");
    if (it->second.kind != gates[g].kind)
      throw SimError("parameters for gate '" + gates[g].id + "' are for a " +
                     std::string(to_string(it->second.kind)) + " gate");
    it->second.validate();
    p[g] = &it->second;
  }
  std::vector<const Schedule*> sched;
  for (const auto& in : ext) {
    auto it = cfg.inputs.find(in);
    if (it == cfg.inputs.end())
      throw SimError("no schedule for external input '" + in + "'");
    sched.push_back(&it->second);
  }
  for (const auto& [var, x0] : cfg.initial)
    if (!c.producer_of(var))
      throw SimError("initial value given for '" + var + "', which no gate produces");

  // Gate input i of gate g reads either external input ext_idx or state idx.
  struct Wire {
    bool external;
    std::size_t index;
  };
  std::vector<std::vector<Wire>> wires(m);
  for (std::size_t g = 0; g < m; ++g)
    for (const auto& v : gates[g].inputs) {
      if (auto prod = c.producer_of(v))
        wires[g].push_back({false, *prod});
      else
        wires[g].push_back(
            {true, static_cast<std::size_t>(std::find(ext.begin(), ext.end(), v) - ext.begin())});
    }

  std::vector<double> x0(m, 0.0);
  for (std::size_t g = 0; g < m; ++g)
    if (auto it = cfg.initial.find(gates[g].output); it != cfg.initial.end())
      x0[g] = it->second;

  const auto grid = uniform_grid(cfg.horizon, cfg.step);
  std::vector<double> uext(ext.size());
  std::vector<double> u;
  auto rhs = [&](double, const Step& st, std::span<const double> x, std::span<double> dx) {
    const double mid = 0.5 * (st.t0 + st.t1);
    for (std::size_t i = 0; i < ext.size(); ++i)
      uext[i] = sched[i]->at(mid);
    for (std::size_t g = 0; g < m; ++g) {
      u.clear();
      for (const auto& w : wires[g])
        u.push_back(w.external ? uext[w.index] : x[w.index]);
      dx[g] = p[g]->alpha * (gate_drive(*p[g], u) - x[g]);
    }
  };
  const auto states = integrate_rk4(rhs, x0, grid);

  std::vector<std::string> names(ext.begin(), ext.end());
  std::vector<std::vector<double>> cols;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    std::vector<double> col(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      col[j] = sched[i]->at(grid[j]);
    cols.push_back(std::move(col));
  }
  for (std::size_t g = 0; g < m; ++g) {
    names.push_back(gates[g].output);
    std::vector<double> col(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      col[j] = states[j][g];
    cols.push_back(std::move(col));
  }
  return Signal(grid, std::move(names), std::move(cols));
}

bool VerifyReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.passed(); });
}

double VerifyReport::min_robustness() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    m = std::min(m, r.robustness);
  return m;
}

VerifyReport verify(const Circuit& c, const std::map<std::string, GateParams>& params,
                    const TimingBudget& tb, const VerifyOptions& opt) {
  const auto& ext = c.external_inputs();
  const std::size_t k = ext.size();
  if (k > 16)
    throw SimError("too many external inputs to enumerate");
  const double delta = tb.network_delta;
  const double lambda = tb.network_lambda;

  VerifyReport rep;
  for (std::size_t code = 0; code < (std::size_t{1} << k); ++code) {
    std::map<std::string, Level> levels;
    for (std::size_t i = 0; i < k; ++i)
      levels[ext[i]] = (code >> (k - 1 - i)) & 1 ? Level::High : Level::Low;
    const auto expected = evaluate_boolean(c, levels);

    SimConfig cfg;
    cfg.step = opt.step;
    cfg.horizon = opt.horizon.value_or(lambda + delta);
    for (const auto& in : ext)
      cfg.inputs[in] = Schedule::constant(levels[in] == Level::High ? 1.0 : 0.0);
    for (const auto& g : c.gates())
      cfg.initial[g.output] = expected.at(g.output) == Level::High ? 0.0 : 1.0;
    for (const auto& [var, x0] : opt.initial)
      cfg.initial[var] = x0;

    Signal trace = simulate_circuit(c, params, cfg);
    const std::size_t trace_idx = rep.traces.size();

    for (const auto& o : c.outputs()) {
      const auto& gate = c.gate(o.gate);
      GateSignals io;
      io.input_vars = ext;
      for (const auto& in : ext)
        io.input_thresholds.push_back(c.thresholds(in));
      io.output_var = gate.output;
      io.output_thresholds = c.thresholds(gate.output);

      ExtendedTruthRow row;
      row.delta = delta;
      row.lambda = lambda;
      for (const auto& in : ext)
        row.inputs.push_back(levels[in]);
      row.output = expected.at(gate.output);

      VerifyRow vr{levels, o.name, gate.output, row.output, row_formula(row, io)};
      vr.robustness = stl::robustness(vr.formula, trace).value;
      vr.consequent_robustness = stl::robustness(row_consequent(row, io), trace).value;
      vr.trace = trace_idx;
      rep.rows.push_back(std::move(vr));
    }
    rep.traces.push_back(std::move(trace));
    rep.combinations.push_back(levels);
  }
  return rep;
}

} // namespace genesynth
