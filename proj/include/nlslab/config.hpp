#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/equation.hpp"

namespace nlslab {

inline constexpr int kSchemaVersion = 1;

/// Malformed or invalid configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  std::size_t node_count = 4096;
  double radius_max = 64.0;
  /// When set, each suite sizes its own grids from the frequencies and
  /// horizon it needs; node_count and radius_max are then ignored.
  bool auto_size = true;

  bool operator==(const GridConfig&) const = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string experiment_id;
  EquationParams equation;
  GridConfig grid;
  /// Data family name, interpreted by the suite ("bump", "gaussian", ...).
  std::string data;
  std::map<std::string, std::vector<double>> sweeps;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> settings;
  std::uint64_t seed = 0;
  std::string output_dir = "runs";

  /// Lookups throw ConfigError naming the missing key.
  const std::vector<double>& sweep(const std::string& name) const;
  double tolerance(const std::string& name) const;
  double setting(const std::string& name) const;
  bool flag(const std::string& name) const { return setting(name) != 0.0; }

  /// Recognized id, non-empty sweeps, positive tolerances, valid equation.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Ids of the experiment suites, in a fixed order.
const std::vector<std::string>& experiment_ids();

/// Accepts an id with or without the "run_" prefix; returns the bare id or
/// throws ConfigError listing the valid ones.
std::string canonical_id(std::string_view id);

/// Defaults for every sweep, tolerance and setting the suite reads.
RunConfig default_config(std::string_view experiment_id);

/// JSON document to validated config. Keys absent from the document keep
/// their defaults; unknown keys are rejected. Errors carry the line and
/// column for syntax problems and the field path for everything else.
RunConfig parse_config(std::string_view text);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

RunConfig load_config(const std::string& path);

}  // namespace nlslab
