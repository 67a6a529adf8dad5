#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace etsim::cli {

using Json = nlohmann::json;

enum class ParamKind { real, integer, boolean };

struct ParamSpec {
  std::string name;  // snake_case key; the CLI flag is --name with '-' for '_'
  ParamKind kind;
  Json default_value;
  std::string help;
};

/// Experiments: dispersion, pulse-train, chaotic, modulation, interferometer.
const std::vector<std::string>& experiments();
const std::vector<ParamSpec>& parameter_specs(const std::string& experiment);
std::size_t default_trials(const std::string& experiment);

struct RunConfig {
  std::string experiment;
  Json parameters = Json::object();
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
  int threads = 1;
  std::string format = "csv";  // csv | json
  std::string model;           // quantum | classical; used by compare only
};

/// Fills defaults and checks every key and type. Unknown keys, bad types and
/// an unknown experiment or format throw InvalidArgument.
RunConfig resolve(const RunConfig& config);

/// Config file layout: {"experiment", "seed", "trials", "parameters", "model"}.
RunConfig config_from_json(const Json& j);
/// The block embedded in every output. Thread count is left out because it
/// never changes results.
Json to_json(const RunConfig& resolved);

struct RunOutput {
  std::string data;                            // main table (csv) or document (json)
  std::map<std::string, std::string> sidecars; // file suffix -> content
  std::string summary;                         // human-readable, one screen
};

RunOutput run(const RunConfig& config);

/// Merged quantum-vs-classical report. Both configs must name the same
/// experiment family (dispersion, modulation or interferometer).
RunOutput compare(const RunConfig& a, const RunConfig& b, const std::string& format);

/// Writes data to `path` (stdout when empty) and sidecars next to it.
void write_output(const RunOutput& out, const std::string& path);

/// 2 for invalid configuration, 3 for numerical-guard failures, 1 otherwise.
int exit_code_for(const std::exception& e);

/// Shortest text that reads back to the same double.
std::string format_number(double x);

}  // namespace etsim::cli
