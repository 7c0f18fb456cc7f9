#include "nlslab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "nlslab/radial_grid.hpp"

namespace nlslab {
namespace {

using json = nlohmann::ordered_json;

using Sweeps = std::map<std::string, std::vector<double>>;
using Scalars = std::map<std::string, double>;

struct Defaults {
  std::string data;
  Sweeps sweeps;
  Scalars tolerances;
  Scalars settings;
};

Defaults defaults_for(const std::string& id) {
  if (id == "linear_decay") {
    return {"bump",
            {{"t", {0.5, 1, 2, 4}},
             {"N", {4, 8, 16, 32}},
             {"dispersive_t", {1, 2, 4, 8, 16, 25}},
             {"inner_M", {8, 16, 32}},
             {"inner_K", {2, 3, 4}}},
            {{"dispersive_slope", 0.1},
             {"dispersive_r2", 0.99},
             {"t_slope", 0.15},
             {"n_slope", 0.2},
             {"min_r2", 0.95}},
            {{"r", 4},
             {"s", 0},
             {"dispersive_freq", 15},
             {"freq_factor", 2},
             {"n_slope_time", 4},
             {"inner_time_scale", 100},
             {"inner_freq_factor", 2.5},
             {"inner_travel_factor", 2.4},
             {"run_dispersive", 1},
             {"run_localized", 1},
             {"run_inner", 1}}};
  }
  if (id == "weighted_strichartz") {
    return {"bump",
            {{"N", {1, 2, 4, 8}},
             {"M", {1, 2, 4, 8}},
             {"alpha", {1, 1.5}},
             {"beta", {0.1, 0.2, 0.3}},
             {"bands", {1, 2, 4, 8}}},
            {{"spread", 10}, {"trend", 0.1}, {"growth", 2}, {"max_weight_product", 0.5}},
            {{"q", 2},
             {"r", 4},
             {"gamma", 0},
             {"horizon", 10},
             {"time_samples", 240},
             {"dt", 2e-3},
             {"amplitude", 1},
             {"split_N", 1},
             {"time_cutoff", 1}}};
  }
  if (id == "mismatch") {
    return {"one",
            {{"A", {4, 8, 16, 32}}},
            {{"slope", 0.3}, {"min_r2", 0.95}},
            {{"sigma", 1},
             {"q", 4},
             {"r", 4},
             {"M", 1},
             {"support", 1},
             {"freq_max", 16},
             {"radius_factor", 8}}};
  }
  if (id == "embedding") {
    return {"test_set",
            {{"lambda", {0.25, 1, 4}}},
            {{"spread", 0.02}},
            {{"p", 2}, {"q", 4}, {"s", 0.5}, {"alpha", 0.5}, {"freq_max", 64}, {"radius_max", 64}}};
  }
  if (id == "global_decomposition") {
    return {"rough",
            {{"N", {2, 4, 8, 16}}, {"bands", {1, 2, 4, 8, 16}}},
            {{"growth", 2},
             {"n_slope", 0.3},
             {"superlinear_gain", 0.05},
             {"control_drift", 1e-8},
             {"min_r2", 0.95}},
            {{"horizon", 10},
             {"dt", 2.5e-3},
             {"snapshot_step", 0.25},
             {"amplitude", 1},
             {"time_cutoff", 1},
             {"delta0", 0},
             {"early_window", 2},
             {"w_constant", 1},
             {"smoothing_q", 2},
             {"smoothing_start", 0.5},
             {"control_run", 1}}};
  }
  if (id == "conservation") {
    return {"gaussian",
            {{"dt", {0.04, 0.02, 0.01, 0.005}}},
            {{"mass_drift", 1e-8}, {"energy_order", 0.2}, {"picard", 1e-3}, {"min_r2", 0.95}},
            {{"horizon", 10},
             {"dt", 1e-3},
             {"snapshot_step", 0.1},
             {"amplitude", 1},
             {"freq_max", 16},
             {"energy_horizon", 1},
             {"picard_horizon", 0.5},
             {"picard_amplitude", 0.1},
             {"picard_iterations", 8},
             {"picard_steps", 400},
             {"run_picard", 1}}};
  }
  throw ConfigError("unreachable experiment id " + id);
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError(fmt::format("config: field '{}' {}", path, what));
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) field_error(path, "must be finite");
  return x;
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) field_error(path, "must be an integer");
  return j.get<long long>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) field_error(path, "must be a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) field_error(path, "must be true or false");
  return j.get<bool>();
}

const json& get_object(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "must be an object");
  return j;
}

std::string known_keys(const auto& map) {
  std::string out;
  for (const auto& [k, v] : map) out += (out.empty() ? "" : ", ") + k;
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      field_error(prefix + key, "is not recognized (expected one of: " + list + ")");
    }
  }
}

template <class Map, class Reader>
void overlay(const json& obj, Map& target, const std::string& section, Reader&& read) {
  for (const auto& [key, value] : get_object(obj, section).items()) {
    const std::string path = section + "." + key;
    auto it = target.find(key);
    if (it == target.end()) {
      field_error(path, "is not used by this experiment (known: " + known_keys(target) + ")");
    }
    it->second = read(value, path);
  }
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "linear_decay", "weighted_strichartz", "mismatch",
      "embedding",    "global_decomposition", "conservation"};
  return ids;
}

std::string canonical_id(std::string_view id) {
  std::string bare(id);
  if (bare.rfind("run_", 0) == 0) bare = bare.substr(4);
  for (const auto& known : experiment_ids()) {
    if (known == bare) return bare;
  }
  std::string list;
  for (const auto& known : experiment_ids()) list += (list.empty() ? "" : ", ") + known;
  throw ConfigError(fmt::format("unknown experiment id '{}'; valid ids: {}", id, list));
}

RunConfig default_config(std::string_view experiment_id) {
  RunConfig cfg;
  cfg.experiment_id = canonical_id(experiment_id);
  Defaults d = defaults_for(cfg.experiment_id);
  cfg.data = std::move(d.data);
  cfg.sweeps = std::move(d.sweeps);
  cfg.tolerances = std::move(d.tolerances);
  cfg.settings = std::move(d.settings);
  return cfg;
}

const std::vector<double>& RunConfig::sweep(const std::string& name) const {
  const auto it = sweeps.find(name);
  if (it == sweeps.end()) throw ConfigError("config: missing required sweep '" + name + "'");
  return it->second;
}

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("config: missing tolerance '" + name + "'");
  return it->second;
}

double RunConfig::setting(const std::string& name) const {
  const auto it = settings.find(name);
  if (it == settings.end()) throw ConfigError("config: missing setting '" + name + "'");
  return it->second;
}

void RunConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    field_error("schema_version", fmt::format("must be {}", kSchemaVersion));
  }
  if (canonical_id(experiment_id) != experiment_id) {
    field_error("experiment_id", "must be the bare id");
  }
  try {
    equation.validate();
  } catch (const std::invalid_argument& e) {
    field_error("equation", std::string("is invalid: ") + e.what());
  }
  if (grid.node_count < RadialGrid::kMinNodes || grid.node_count > RadialGrid::kMaxNodes) {
    field_error("grid.node_count", fmt::format("must lie in [{}, {}]", RadialGrid::kMinNodes,
                                               RadialGrid::kMaxNodes));
  }
  if (!(grid.radius_max > 0.0)) field_error("grid.radius_max", "must be positive");
  for (const auto& [name, values] : sweeps) {
    if (values.empty()) field_error("sweeps." + name, "must be non-empty");
    for (const double v : values) {
      if (!std::isfinite(v)) field_error("sweeps." + name, "must hold finite numbers");
    }
  }
  for (const auto& [name, value] : tolerances) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      field_error("tolerances." + name, "must be positive");
    }
  }
  for (const auto& [name, value] : settings) {
    if (!std::isfinite(value)) field_error("settings." + name, "must be finite");
  }
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(fmt::format("config: syntax error at line {}, column {}: {}", line,
                                  col, e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config: the document must be a JSON object");
  reject_unknown(doc,
                 {"schema_version", "experiment_id", "equation", "grid", "data", "sweeps",
                  "tolerances", "settings", "seed", "output_dir"},
                 "");
  if (!doc.contains("experiment_id")) {
    throw ConfigError("config: missing required field 'experiment_id'");
  }
  RunConfig cfg = default_config(get_string(doc["experiment_id"], "experiment_id"));

  if (doc.contains("schema_version")) {
    const auto v = get_integer(doc["schema_version"], "schema_version");
    if (v != kSchemaVersion) {
      field_error("schema_version", fmt::format("is {}; this build reads {}", v, kSchemaVersion));
    }
  }
  if (doc.contains("equation")) {
    const json& eq = get_object(doc["equation"], "equation");
    reject_unknown(eq, {"dim", "p", "mu", "time_cutoff"}, "equation.");
    if (eq.contains("dim")) cfg.equation.dim = static_cast<int>(get_integer(eq["dim"], "equation.dim"));
    if (eq.contains("p")) cfg.equation.p = get_number(eq["p"], "equation.p");
    if (eq.contains("mu")) cfg.equation.mu = static_cast<int>(get_integer(eq["mu"], "equation.mu"));
    if (eq.contains("time_cutoff")) {
      if (eq["time_cutoff"].is_null()) {
        cfg.equation.time_cutoff.reset();
      } else {
        cfg.equation.time_cutoff = get_number(eq["time_cutoff"], "equation.time_cutoff");
      }
    }
  }
  if (doc.contains("grid")) {
    const json& g = get_object(doc["grid"], "grid");
    reject_unknown(g, {"node_count", "radius_max", "auto_size"}, "grid.");
    if (g.contains("node_count")) {
      const auto n = get_integer(g["node_count"], "grid.node_count");
      if (n < 0) field_error("grid.node_count", "must be positive");
      cfg.grid.node_count = static_cast<std::size_t>(n);
    }
    if (g.contains("radius_max")) cfg.grid.radius_max = get_number(g["radius_max"], "grid.radius_max");
    if (g.contains("auto_size")) cfg.grid.auto_size = get_bool(g["auto_size"], "grid.auto_size");
  }
  if (doc.contains("data")) cfg.data = get_string(doc["data"], "data");
  if (doc.contains("sweeps")) {
    overlay(doc["sweeps"], cfg.sweeps, "sweeps", [](const json& v, const std::string& path) {
      if (!v.is_array()) field_error(path, "must be an array of numbers");
      std::vector<double> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_number(v[i], fmt::format("{}[{}]", path, i)));
      }
      return out;
    });
  }
  if (doc.contains("tolerances")) {
    overlay(doc["tolerances"], cfg.tolerances, "tolerances", get_number);
  }
  if (doc.contains("settings")) {
    overlay(doc["settings"], cfg.settings, "settings", get_number);
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      field_error("seed", "must be a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) cfg.output_dir = get_string(doc["output_dir"], "output_dir");

  cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  doc["schema_version"] = cfg.schema_version;
  doc["experiment_id"] = cfg.experiment_id;
  doc["equation"] = {{"dim", cfg.equation.dim}, {"p", cfg.equation.p}, {"mu", cfg.equation.mu}};
  doc["equation"]["time_cutoff"] =
      cfg.equation.time_cutoff ? json(*cfg.equation.time_cutoff) : json(nullptr);
  doc["grid"] = {{"node_count", cfg.grid.node_count},
                 {"radius_max", cfg.grid.radius_max},
                 {"auto_size", cfg.grid.auto_size}};
  doc["data"] = cfg.data;
  doc["sweeps"] = json::object();
  for (const auto& [k, v] : cfg.sweeps) doc["sweeps"][k] = v;
  doc["tolerances"] = json::object();
  for (const auto& [k, v] : cfg.tolerances) doc["tolerances"][k] = v;
  doc["settings"] = json::object();
  for (const auto& [k, v] : cfg.settings) doc["settings"][k] = v;
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace nlslab
