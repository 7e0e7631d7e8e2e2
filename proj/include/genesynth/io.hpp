#pragma once

#include "genesynth/netgraph.hpp"
#include "genesynth/odesim.hpp"
#include "genesynth/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace genesynth {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// Circuit file:
///   gates: [{id, kind, inputs: [var...], output: var}]
///   external_inputs: [var...]
///   outputs: [{gate, name}]
///   thresholds: {var or "*": {plus, minus, p}}
///   timing: {delta, lambda}          (optional)
///   sim: {h, horizon, initial: {var: x0}}   (optional)
Circuit circuit_from_json(const json& j);
json circuit_to_json(const Circuit& c);
Circuit load_circuit(const std::filesystem::path& path);

/// Parameter file: {"gates": {id: {n, alpha, K: [...]}}}. Every gate of the
/// circuit must be present; the kind comes from the circuit.
std::map<std::string, GateParams> params_from_json(const json& j, const Circuit& c);
json params_to_json(const Circuit& c, const std::map<std::string, GateParams>& p);

/// Unbounded interval ends are written as null.
json to_json(const Interval& iv);
json to_json(const ParamBox& box);
json to_json(const TimingBudget& tb, const Circuit& c);
json to_json(const SynthesisResult& r);
json to_json(const NumericSynthesis& r);
json to_json(const VerifyReport& r);

std::string format_number(double x);

} // namespace genesynth
