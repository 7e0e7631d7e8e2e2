#pragma once

#include "genesynth/gatelib.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace genesynth {

/// Upper level of an input species after rescaling.
inline constexpr double kGamma = 1.0;

/// Constant inputs and initial output that make a row hardest to satisfy.
struct WorstCaseAssignment {
  std::vector<double> input_levels;
  double x0 = 0.0;
  ExtendedTruthRow row;
};

/// Throws std::invalid_argument if the row's output disagrees with the gate's
/// truth function or the threshold count does not match the arity.
///
/// AND/OR, output high: high inputs at θ+, low inputs at 0, x0 = 0.
/// AND/OR, output low: high inputs at γ = 1, low inputs at θ−, x0 = 1.
/// NOT: input at θ− (output high, x0 = 0) or θ+ (output low, x0 = 1).
WorstCaseAssignment worst_case(GateKind kind, const ExtendedTruthRow& row,
                               std::span<const Thresholds> th);

} // namespace genesynth
