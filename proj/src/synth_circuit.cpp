#include "genesynth/odesim.hpp"
#include "genesynth/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace genesynth {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string row_label(std::initializer_list<Level> in, Level out) {
  std::string s = "(";
  bool first = true;
  for (Level l : in) {
    s += (first ? "" : ",") + std::string(l == Level::High ? "high" : "low");
    first = false;
  }
  return s + ")->" + (out == Level::High ? "high" : "low");
}

// Index of the input whose log(θ+/θ−) is smallest; it fixes the n bound.
std::size_t weakest_input(const std::vector<Thresholds>& in) {
  return std::log(in[1].plus / in[1].minus) < std::log(in[0].plus / in[0].minus) ? 1 : 0;
}

std::string binding_rows(GateKind kind, const std::vector<Thresholds>& in) {
  const Level H = Level::High, L = Level::Low;
  if (kind == GateKind::Not)
    return row_label({L}, H) + " vs " + row_label({H}, L);
  const std::size_t w = weakest_input(in);
  if (kind == GateKind::And)
    return row_label({H, H}, H) + " vs " +
           (w == 0 ? row_label({L, H}, L) : row_label({H, L}, L));
  return (w == 0 ? row_label({H, L}, H) : row_label({L, H}, H)) + " vs " + row_label({L, L}, L);
}

double hill_for(const GateSpec& g, const HillChoice& n) {
  if (auto it = n.find(g.id); it != n.end())
    return it->second;
  if (auto it = n.find(std::string(to_string(g.kind))); it != n.end())
    return it->second;
  throw SynthError("no Hill coefficient given for gate '" + g.id + "'");
}

// Samples the region on a cell-centred grid over its outer rectangle.
bool region_has_point(const CurvedRegion& r, std::size_t res = 200) {
  const auto box = r.bounding_box();
  if (box[0].empty() || box[1].empty())
    return false;
  for (std::size_t i = 0; i < res; ++i)
    for (std::size_t j = 0; j < res; ++j) {
      const double k[2] = {box[0].lo + box[0].width() * (i + 0.5) / res,
                           box[1].lo + box[1].width() * (j + 0.5) / res};
      if (r.contains(k).inside)
        return true;
    }
  return false;
}

} // namespace

EmptyRegionError::EmptyRegionError(std::string gate, std::string binding,
                                   const std::string& detail)
    : SynthError("empty parameter region for gate '" + gate + "' (binding rows " + binding +
                 "): " + detail),
      gate_(std::move(gate)), binding_(std::move(binding)) {}

ParamBox SynthesisResult::combined() const {
  std::vector<ParamBox> boxes;
  for (const auto& g : gates)
    boxes.push_back(g.box);
  return intersect(boxes);
}

SynthesisResult synthesize_circuit(const Circuit& c, const TimingBudget& tb, Method method,
                                   const HillChoice& choice) {
  SynthesisResult res;
  res.method = method;
  for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
    const auto& spec = c.gates()[gi];
    const GateSignals io = c.signals(gi);
    GateSynthesis gs;
    gs.gate = spec.id;
    gs.kind = spec.kind;
    for (const auto& in : spec.inputs)
      gs.k_axes.push_back("K_" + in + "_" + spec.output);
    gs.n_axis = "n_" + spec.output;
    gs.alpha_axis = "alpha_" + spec.output;
    gs.n = hill_for(spec, choice);
    if (!(gs.n > 0.0))
      throw SynthError("Hill coefficient for gate '" + spec.id + "' must be > 0");
    gs.alpha_bound = alpha_bound(io.output_thresholds, tb.delta.at(spec.id));
    gs.binding = binding_rows(spec.kind, io.input_thresholds);

    const auto& in = io.input_thresholds;
    const auto& out = io.output_thresholds;
    std::vector<Interval> k;
    switch (spec.kind) {
    case GateKind::Not: {
      auto b = not_bounds(in[0], out, gs.n);
      gs.n_bound = b.n_bound;
      k = {b.box.at("K1")};
      break;
    }
    case GateKind::And:
      if (method == Method::M1) {
        gs.n_bound = and_n_bound_m1(in[0], in[1], out);
        auto b = and_box_m1(in[0], in[1], out, gs.n);
        k = {b.at("K1"), b.at("K2")};
      } else {
        gs.n_bound = and_n_bound_m2(in[0], in[1], out);
      }
      break;
    case GateKind::Or:
      if (method == Method::M1) {
        auto b = or_bounds_m1(in[0], in[1], out, gs.n);
        gs.n_bound = b.n_bound;
        k = {b.box.at("K1"), b.box.at("K2")};
      } else {
        gs.n_bound = or_n_bound_m2(in[0], in[1], out);
        gs.n_bound_strict = true;
      }
      break;
    }

    const bool below = gs.n_bound_strict ? !(gs.n > gs.n_bound) : gs.n < gs.n_bound;
    if (below)
      throw EmptyRegionError(spec.id, gs.binding,
                             "n = " + fmt(gs.n) + " is below the bound " + fmt(gs.n_bound));

    if (method == Method::M2 && spec.kind != GateKind::Not) {
      gs.region.emplace(spec.kind, in, out, gs.n);
      k = gs.region->bounding_box();
      if (!region_has_point(*gs.region))
        throw EmptyRegionError(spec.id, gs.binding, "no point satisfies the region inequalities");
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i].empty())
        throw EmptyRegionError(spec.id, gs.binding,
                               "interval for " + gs.k_axes[i] + " is empty");
      gs.box.set(gs.k_axes[i], k[i]);
    }
    gs.box.set(gs.n_axis, {gs.n_bound, kUnbounded});
    gs.box.set(gs.alpha_axis, {gs.alpha_bound, kUnbounded});
    res.gates.push_back(std::move(gs));
  }
  return res;
}

double analytic_row_robustness(const GateParams& g, const ExtendedTruthRow& row,
                               std::span<const Thresholds> in, const Thresholds& out) {
  const auto wc = worst_case(g.kind, row, in);
  const double drive = gate_drive(g, wc.input_levels);
  const double x = closed_form(drive, g.alpha, wc.x0, row.delta);
  return row.output == Level::High ? x - out.plus : out.minus - x;
}

double analytic_min_robustness(const GateParams& g, std::span<const Thresholds> in,
                               const Thresholds& out, double delta, double lambda) {
  GateSignals io;
  for (std::size_t i = 0; i < in.size(); ++i) {
    io.input_vars.push_back("u" + std::to_string(i + 1));
    io.input_thresholds.push_back(in[i]);
  }
  io.output_var = "y";
  io.output_thresholds = out;
  double m = kUnbounded;
  for (const auto& e : truth_table(g.kind, delta, lambda, io))
    m = std::min(m, analytic_row_robustness(g, e.row, in, out));
  return m;
}

std::vector<RowCheck> check_rows(const GateParams& g, std::span<const Thresholds> in,
                                 const Thresholds& out, double delta, double lambda,
                                 double step) {
  GateSignals io;
  for (std::size_t i = 0; i < in.size(); ++i) {
    io.input_vars.push_back("u" + std::to_string(i + 1));
    io.input_thresholds.push_back(in[i]);
  }
  io.output_var = "y";
  io.output_thresholds = out;

  SimConfig cfg;
  cfg.step = step;
  cfg.horizon = lambda + delta;
  std::vector<RowCheck> rows;
  for (const auto& e : truth_table(g.kind, delta, lambda, io)) {
    const auto wc = worst_case(g.kind, e.row, in);
    std::vector<ConstantStimulus> stim;
    for (double level : wc.input_levels)
      stim.push_back({level, cfg.horizon});
    const Signal s = simulate_gate(g, stim, wc.x0, cfg, io.input_vars, io.output_var);
    RowCheck rc;
    rc.row = e.row;
    rc.consequent = stl::robustness(row_consequent(e.row, io), s).value;
    rc.full = stl::robustness(e.formula, s).value;
    rows.push_back(std::move(rc));
  }
  return rows;
}

double min_consequent(const std::vector<RowCheck>& rows) {
  double m = kUnbounded;
  for (const auto& r : rows)
    m = std::min(m, r.consequent);
  return m;
}

double GridAxis::value(std::size_t i) const {
  if (count <= 1)
    return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

bool NumericSynthesis::ok() const {
  return std::all_of(gates.begin(), gates.end(),
                     [](const NumericGateResult& g) { return g.status == NumericStatus::Ok; });
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GENESYNTH_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0)
      n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(1, n);
}

NumericSynthesis synthesize_numeric(const Circuit& c, const TimingBudget& tb,
                                    const NumericOptions& opt) {
  if (!(opt.step > 0.0))
    throw SynthError("integrator step must be > 0");
  NumericSynthesis res;
  const std::size_t workers = worker_count(opt.threads);
  for (std::size_t gi = 0; gi < c.gates().size(); ++gi) {
    const auto& spec = c.gates()[gi];
    const GateSignals io = c.signals(gi);
    const double delta = tb.delta.at(spec.id);
    const double lambda = tb.lambda.at(spec.id);

    NumericGateResult gr;
    gr.gate = spec.id;
    std::vector<GridAxis> grid;
    for (const auto& in : spec.inputs)
      gr.axes.push_back("K_" + in + "_" + spec.output);
    gr.axes.push_back("n_" + spec.output);
    gr.axes.push_back("alpha_" + spec.output);
    for (const auto& axis : gr.axes) {
      auto it = opt.axes.find(axis);
      GridAxis ga;
      if (it != opt.axes.end())
        ga = it->second;
      else if (axis.rfind("alpha_", 0) == 0)
        ga = {alpha_bound(io.output_thresholds, delta), 0.0, 1};
      else
        throw SynthError("grid has no axis '" + axis + "'");
      if (ga.count == 0 || !std::isfinite(ga.lo) || !std::isfinite(ga.hi) ||
          (ga.count > 1 && ga.lo > ga.hi))
        throw SynthError("grid axis '" + axis + "' is empty");
      grid.push_back(ga);
    }

    std::size_t total = 1;
    for (const auto& ga : grid)
      total *= ga.count;
    gr.points.resize(total);
    gr.min_robustness.resize(total);
    gr.admissible.resize(total);
    const std::size_t d = grid.size();
    const std::size_t nk = spec.inputs.size();

    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t p; (p = next.fetch_add(1)) < total;) {
        std::vector<double> pt(d);
        std::size_t rest = p;
        for (std::size_t a = d; a-- > 0;) {
          pt[a] = grid[a].value(rest % grid[a].count);
          rest /= grid[a].count;
        }
        GateParams gp{spec.kind, pt[nk], pt[nk + 1], std::vector<double>(pt.begin(), pt.begin() + nk)};
        double r = -kUnbounded;
        try {
          gp.validate();
          r = min_consequent(check_rows(gp, io.input_thresholds, io.output_thresholds, delta,
                                        lambda, opt.step));
        } catch (const std::invalid_argument&) {
        }
        gr.points[p] = std::move(pt);
        gr.min_robustness[p] = r;
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(workers, total); ++w)
      pool.emplace_back(work);
    work();
    for (auto& t : pool)
      t.join();

    std::vector<Interval> bb(d, Interval{kUnbounded, -kUnbounded});
    for (std::size_t p = 0; p < total; ++p) {
      gr.admissible[p] = gr.min_robustness[p] >= 0.0;
      if (!gr.admissible[p])
        continue;
      for (std::size_t a = 0; a < d; ++a) {
        bb[a].lo = std::min(bb[a].lo, gr.points[p][a]);
        bb[a].hi = std::max(bb[a].hi, gr.points[p][a]);
      }
      if (!gr.best || gr.min_robustness[p] > gr.min_robustness[*gr.best])
        gr.best = p;
    }
    if (!gr.best)
      gr.status = NumericStatus::NoAdmissiblePoint;
    else
      for (std::size_t a = 0; a < d; ++a)
        gr.bounding_box.set(gr.axes[a], bb[a]);
    res.gates.push_back(std::move(gr));
  }
  return res;
}

} // namespace genesynth
