#pragma once

#include "genesynth/gatelib.hpp"
#include "genesynth/netgraph.hpp"
#include "genesynth/signal.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace genesynth {

class SimError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Piecewise-constant input: `level` from `start` until the next segment.
class Schedule {
public:
  struct Segment {
    double start;
    double level;
  };

  Schedule() = default;
  explicit Schedule(std::vector<Segment> segments);
  static Schedule constant(double level) { return Schedule({{0.0, level}}); }

  /// Level on the segment containing t (a segment owns its start time).
  double at(double t) const;
  const std::vector<Segment>& segments() const { return segments_; }

private:
  std::vector<Segment> segments_{{0.0, 0.0}};
};

/// Integration window of the current RK4 step.
struct Step {
  double t0;
  double t1;
};

/// Input trace seen by a simulated gate.
///
/// Schedules are read once per step at its midpoint, so a breakpoint on the
/// time grid never leaks into a neighbouring step. Continuous sources are
/// read at each stage time.
class InputSource {
public:
  InputSource(Schedule s); // NOLINT(google-explicit-constructor)
  explicit InputSource(std::function<double(double)> f);

  double eval(double t, const Step& step) const;
  double sample(double t) const;

private:
  std::optional<Schedule> schedule_;
  std::function<double(double)> fn_;
};

struct SimConfig {
  double step = 0.01;
  double horizon = 1.0;
  std::map<std::string, double> initial;   // per gate output variable
  std::map<std::string, Schedule> inputs;  // per external input

  /// Throws SimError unless h > 0, T > 0 and initial values lie in [0, 1].
  void validate() const;
};

using OdeRhs = std::function<void(double t, const Step& step, std::span<const double> x,
                                  std::span<double> dxdt)>;

/// Classic fixed-step RK4 over `grid` (grid[0] is the initial time; the last
/// step may be shorter). Returns one state vector per grid point.
std::vector<std::vector<double>> integrate_rk4(const OdeRhs& f, std::vector<double> x0,
                                               std::span<const double> grid);

/// Single gate under constant inputs. Each stimulus must be held for the
/// whole horizon. Output columns: inputs (default names u1, u2) then output.
Signal simulate_gate(const GateParams& g, std::span<const ConstantStimulus> inputs, double x0,
                     const SimConfig& cfg, std::vector<std::string> input_vars = {},
                     const std::string& output_var = "y");

/// Single gate under arbitrary inputs.
Signal simulate_gate(const GateParams& g, const std::vector<InputSource>& inputs, double x0,
                     const SimConfig& cfg, std::vector<std::string> input_vars = {},
                     const std::string& output_var = "y");

/// All gates advanced together. Params are keyed by gate id; every external
/// input needs a schedule. Missing initial values default to 0. Columns:
/// external inputs, then gate outputs in gate order.
Signal simulate_circuit(const Circuit& c, const std::map<std::string, GateParams>& params,
                        const SimConfig& cfg);

struct VerifyOptions {
  double step = 0.01;
  std::optional<double> horizon;          // default: network λ + δ
  std::map<std::string, double> initial;  // overrides the worst-case start
};

struct VerifyRow {
  std::map<std::string, Level> inputs;
  std::string output;  // network output name
  std::string var;     // variable it reads
  Level expected = Level::Low;
  stl::Formula formula;
  double robustness = 0.0;
  double consequent_robustness = 0.0;
  std::size_t trace = 0;  // index into VerifyReport::traces
  bool passed() const { return robustness >= 0.0; }
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  std::vector<Signal> traces;  // one per input combination
  std::vector<std::map<std::string, Level>> combinations;
  bool passed() const;
  double min_robustness() const;
};

/// Drives every combination of external inputs at 1 (high) / 0 (low), held
/// for the network's λ + δ, and monitors each network output's truth-table
/// row with network δ and λ. Each gate starts at the level opposite to its
/// expected value unless overridden.
VerifyReport verify(const Circuit& c, const std::map<std::string, GateParams>& params,
                    const TimingBudget& tb, const VerifyOptions& opt = {});

} // namespace genesynth
