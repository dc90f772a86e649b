#pragma once

// JSON documents for systems, state specs, engineering parameters and
// initial states.
//
//   system:     {"n": 2, "m": 1, "G": [[...], ...], "C": [[[re, im], ...], ...]}
//   spec:       {"n": 2, "X": [[...]], "Y": [[...]]}
//   parameters: {"P": [[[re, im], ...]], "R": [[...]], "Gamma": [[...]]}
//   state:      {"mean": [...], "V": [[...]]}
//
// Matrices are row-major nested arrays. Complex entries are [re, im]; a bare
// number is accepted on input as a real value. Canonical output sorts keys
// and prints every number with 17 significant digits, so save -> load -> save
// is byte-identical.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "puregauss/engineer.hpp"
#include "puregauss/model.hpp"
#include "puregauss/steady.hpp"

namespace puregauss::io {

using Json = nlohmann::json;

Json to_json(const GaussianDynamics& sys);
Json to_json(const PureStateSpec& spec);
Json to_json(const EngineeringParameters& params);
Json to_json(const GaussianState& state);
Json to_json(const Theorem1Report& report);

GaussianDynamics system_from_json(const Json& doc);
PureStateSpec spec_from_json(const Json& doc);
EngineeringParameters parameters_from_json(const Json& doc);
GaussianState state_from_json(const Json& doc);

Json real_matrix_json(const RealMatrix& m);
Json complex_matrix_json(const ComplexMatrix& m);

/// Canonical text: sorted keys, %.17g numbers, one matrix row per line.
std::string canonical_dump(const Json& doc);

/// Parses text; syntax errors become Schema errors carrying line and column.
Json parse(const std::string& text, const std::string& origin = "<input>");
Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace puregauss::io
