#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genesynth {

class SignalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two sample times closer than this are treated as the same instant.
inline constexpr double kTimeEps = 1e-9;

/// Finitely sampled multi-variable trace, read as piecewise-linear in time.
///
/// Times start at 0 and are strictly increasing. Each variable carries one
/// sample per time point. Instances are immutable once built.
class Signal {
public:
  Signal(std::vector<double> times, std::vector<std::string> names,
         std::vector<std::vector<double>> columns);

  const std::vector<double>& times() const { return times_; }
  const std::vector<std::string>& variables() const { return names_; }
  std::size_t size() const { return times_.size(); }
  double t_end() const { return times_.back(); }

  bool has(const std::string& var) const;
  std::span<const double> values(const std::string& var) const;

  /// Linear interpolation of `var` at `t`; throws outside [0, t_end].
  double sample_at(const std::string& var, double t) const;

  /// Index of the sample at time `t` (within kTimeEps), or throws.
  std::size_t index_of(double t) const;

  /// New signal with an extra column appended (same time grid).
  Signal with_variable(const std::string& var, std::vector<double> column) const;

private:
  std::size_t column_of(const std::string& var) const;

  std::vector<double> times_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

/// Constant input level held for a fixed duration.
struct ConstantStimulus {
  double level = 0.0;
  double hold_duration = 1.0;

  void validate() const;
};

/// Uniform sampling of a constant stimulus over [0, hold_duration].
/// If the duration is not a multiple of `step` the last sample sits at the
/// duration itself.
Signal from_constant(const ConstantStimulus& c, double step, const std::string& var = "x");

/// Uniform time grid 0, h, 2h, ... up to `horizon` (last point = horizon).
std::vector<double> uniform_grid(double horizon, double step);

/// CSV with header `t,var1,var2,...`, one row per time point.
void write_csv(std::ostream& os, const Signal& s);
Signal read_csv(std::istream& is);

} // namespace genesynth
