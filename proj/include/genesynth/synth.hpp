#pragma once

#include "genesynth/gatelib.hpp"
#include "genesynth/netgraph.hpp"
#include "genesynth/worstcase.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genesynth {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = -kUnbounded;
  double hi = kUnbounded;

  bool empty() const { return lo > hi; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

Interval intersect(const Interval& a, const Interval& b);

/// Named closed intervals. An axis that is not present spans its whole
/// domain.
class ParamBox {
public:
  ParamBox() = default;
  ParamBox(std::map<std::string, Interval> axes) : axes_(std::move(axes)) {} // NOLINT

  ParamBox& set(const std::string& axis, Interval iv);
  bool has(const std::string& axis) const { return axes_.count(axis) != 0; }
  const Interval& at(const std::string& axis) const { return axes_.at(axis); }
  const std::map<std::string, Interval>& axes() const { return axes_; }

  bool empty() const;
  /// Points must name every axis of the box.
  bool contains(const std::map<std::string, double>& point) const;

private:
  std::map<std::string, Interval> axes_;
};

ParamBox intersect(std::span<const ParamBox> boxes);

/// Which inequality decides membership: the violated one when outside, the
/// tightest one when inside.
struct Membership {
  bool inside = false;
  std::string binding;
  double slack = 0.0;
};

/// α ≥ ln(1/(p θ−)) / δ, with the output species' thresholds.
double alpha_bound(const Thresholds& out, double delta);

double and_n_bound_m1(const Thresholds& a, const Thresholds& b, const Thresholds& c);
double and_n_bound_m2(const Thresholds& a, const Thresholds& b, const Thresholds& c);
ParamBox and_box_m1(const Thresholds& a, const Thresholds& b, const Thresholds& c, double n,
                    const std::string& axis1 = "K1", const std::string& axis2 = "K2");
Membership and_region_m2(const Thresholds& a, const Thresholds& b, const Thresholds& c, double n,
                         double k_ac, double k_bc);

struct GateBounds {
  double n_bound = 0.0;
  ParamBox box;
};

GateBounds not_bounds(const Thresholds& in, const Thresholds& out, double n,
                      const std::string& axis = "K1");
GateBounds or_bounds_m1(const Thresholds& e, const Thresholds& g, const Thresholds& s, double n,
                        const std::string& axis1 = "K1", const std::string& axis2 = "K2");
/// Strict bound: the region is nonempty only for n above it.
double or_n_bound_m2(const Thresholds& e, const Thresholds& g, const Thresholds& s);
Membership or_region_m2(const Thresholds& e, const Thresholds& g, const Thresholds& s, double n,
                        double k_es, double k_gs);

/// Boundary curve K1 = f(K2) of a curve-bounded region; nullopt where the
/// expression is undefined.
struct BoundaryCurve {
  std::string name;
  bool upper = false;
  std::function<std::optional<double>(double)> eval;
};

/// Method 2 region of one gate at fixed n. NOT gates have no curved region;
/// their set is the interval of `not_bounds`.
class CurvedRegion {
public:
  CurvedRegion(GateKind kind, std::vector<Thresholds> inputs, Thresholds output, double n);

  GateKind kind() const { return kind_; }
  double n() const { return n_; }
  const std::vector<Thresholds>& inputs() const { return inputs_; }
  const Thresholds& output() const { return output_; }

  Membership contains(std::span<const double> k) const;
  /// Outer rectangle containing the region.
  std::vector<Interval> bounding_box() const;
  std::vector<BoundaryCurve> curves() const;

private:
  GateKind kind_;
  std::vector<Thresholds> inputs_;
  Thresholds output_;
  double n_;
};


enum class Method { M1, M2 };

/// Membership in a Method 1 box (NOT gates: the interval) with per-side
/// slacks named K<i>_lower / K<i>_upper.
Membership box_membership(const ParamBox& box, const std::vector<std::string>& axes,
                          std::span<const double> k);

/// Cell-centred sampling of a gate's K-plane (K-line for NOT) over (0, 1].
struct RegionGrid {
  GateKind kind = GateKind::And;
  std::vector<Thresholds> inputs;
  Thresholds output;
  double n = 4.0;
  Method method = Method::M2;
  std::size_t resolution = 50;
  double alpha = 1.0;
  double delta = 4.0;
  double lambda = 12.0;
};

struct RegionPoint {
  std::vector<double> k;
  Membership membership;
  double min_robustness = 0.0;  // closed form over all rows
};

/// Points in row-major order, first coordinate slowest; K = (i + 0.5) / R.
std::vector<RegionPoint> region_grid(const RegionGrid& spec);

/// Header `K1,K2,inside,binding_constraint,min_robustness` (no K2 for NOT).
void write_region_csv(std::ostream& os, const std::vector<RegionPoint>& points);

class SynthError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EmptyRegionError : public SynthError {
public:
  EmptyRegionError(std::string gate, std::string binding, const std::string& detail);
  const std::string& gate() const { return gate_; }
  const std::string& binding() const { return binding_; }

private:
  std::string gate_;
  std::string binding_;
};

struct GateSynthesis {
  std::string gate;
  GateKind kind = GateKind::And;
  std::vector<std::string> k_axes;  // K_<input>_<output>
  std::string n_axis;               // n_<output>
  std::string alpha_axis;           // alpha_<output>
  double n = 0.0;
  double n_bound = 0.0;
  bool n_bound_strict = false;
  double alpha_bound = 0.0;
  std::string binding;  // rows that fix the n bound
  /// Method 1: the K box. Method 2: the outer rectangle of the region.
  /// Both carry n ∈ [n_bound, ∞) and α ∈ [alpha_bound, ∞).
  ParamBox box;
  std::optional<CurvedRegion> region;  // Method 2, two-input gates
};

struct SynthesisResult {
  Method method = Method::M1;
  std::vector<GateSynthesis> gates;

  ParamBox combined() const;
};

/// n per gate, keyed by gate id or gate kind ("AND", "OR", "NOT"); ids win.
using HillChoice = std::map<std::string, double>;

SynthesisResult synthesize_circuit(const Circuit& c, const TimingBudget& tb, Method method,
                                   const HillChoice& n);

/// Closed-form robustness of the row consequent F[0,δ]G[0,λ](out) under the
/// row's worst-case constant inputs. Uses monotonicity of the response.
double analytic_row_robustness(const GateParams& g, const ExtendedTruthRow& row,
                               std::span<const Thresholds> in, const Thresholds& out);
double analytic_min_robustness(const GateParams& g, std::span<const Thresholds> in,
                               const Thresholds& out, double delta, double lambda);

struct RowCheck {
  ExtendedTruthRow row;
  double consequent = 0.0;  // F[0,δ]G[0,λ](out) at t = 0
  double full = 0.0;        // whole row implication at t = 0
};

/// Simulates the gate under each row's worst-case inputs and monitors it.
std::vector<RowCheck> check_rows(const GateParams& g, std::span<const Thresholds> in,
                                 const Thresholds& out, double delta, double lambda,
                                 double step = 0.01);
double min_consequent(const std::vector<RowCheck>& rows);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  double value(std::size_t i) const;
};

struct NumericOptions {
  std::map<std::string, GridAxis> axes;  // by axis name; alpha defaults to its bound
  double step = 0.01;
  std::size_t threads = 0;  // 0: GENESYNTH_THREADS or hardware concurrency
};

enum class NumericStatus { Ok, NoAdmissiblePoint };

struct NumericGateResult {
  std::string gate;
  std::vector<std::string> axes;
  std::vector<std::vector<double>> points;  // grid order, last axis fastest
  std::vector<double> min_robustness;
  std::vector<bool> admissible;
  ParamBox bounding_box;  // of admissible points
  std::optional<std::size_t> best;  // argmax of min_robustness
  NumericStatus status = NumericStatus::Ok;
};

struct NumericSynthesis {
  std::vector<NumericGateResult> gates;
  bool ok() const;
};

/// Threads used for grid evaluation: GENESYNTH_THREADS caps the hardware count.
std::size_t worker_count(std::size_t requested = 0);

NumericSynthesis synthesize_numeric(const Circuit& c, const TimingBudget& tb,
                                    const NumericOptions& opt);

} // namespace genesynth
