#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starkbeat/types.hpp"

namespace starkbeat::config {

struct SweepConfig {
  double f_min = 0.15;
  double f_max = 0.23;
  int f_steps = 81;
  bool present = false;
};

struct TimeConfig {
  double t_min = 1e2;
  double t_max = 1e4;
  int t_points = 2000;
  bool log_spacing = true;
};

struct OutputConfig {
  std::string path;          // empty = stdout
  std::string format = "csv";
  int precision = 17;
};

/// Fully resolved run configuration. Every ModelParams invariant is
/// re-validated at parse time with line-precise error messages.
struct RunConfig {
  ModelParams model;
  GaussianState state;
  SweepConfig sweep;
  TimeConfig time;
  OutputConfig output;

  void validate() const;  // throws Error(bad_config)
};

/// Parse the flat `key = value` text format with [model]/[state]/[sweep]/
/// [time]/[output] section headers. `#` and `;` start comments. Unknown
/// keys and malformed lines are errors carrying the 1-based line number.
RunConfig parse(std::istream& in, const std::string& source_name = "<config>");

/// Load from a file; a file whose first non-space byte is `{` is read as a
/// JSON object (the format emitted by the CLI), taking its "config" member
/// when present so result files can be re-ingested directly.
RunConfig load_file(const std::string& path);

/// Apply a `section.key=value` override (the --set flag).
void apply_override(RunConfig& cfg, const std::string& spec);

/// Key/value view of a config in section order, used by the writers so
/// emitted headers and JSON always carry the full resolved configuration.
std::vector<std::pair<std::string, std::string>> flatten(const RunConfig& cfg,
                                                         int precision = 17);

}  // namespace starkbeat::config
