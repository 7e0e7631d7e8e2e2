#include "genesynth/worstcase.hpp"

namespace genesynth {

WorstCaseAssignment worst_case(GateKind kind, const ExtendedTruthRow& row,
                               std::span<const Thresholds> th) {
  const auto k = static_cast<std::size_t>(arity(kind));
  if (row.inputs.size() != k || th.size() != k)
    throw std::invalid_argument("row or thresholds do not match gate arity");
  if (gate_truth(kind, row.inputs) != row.output)
    throw std::invalid_argument("row output is inconsistent with the " +
                                std::string(to_string(kind)) + " truth function");

  WorstCaseAssignment w;
  w.row = row;
  const bool high_out = row.output == Level::High;
  w.x0 = high_out ? 0.0 : 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const bool high_in = row.inputs[i] == Level::High;
    double level;
    if (kind == GateKind::Not)
      level = high_in ? th[i].plus : th[i].minus;
    else if (high_out)
      level = high_in ? th[i].plus : 0.0;
    else
      level = high_in ? kGamma : th[i].minus;
    w.input_levels.push_back(level);
  }
  return w;
}

} // namespace genesynth
