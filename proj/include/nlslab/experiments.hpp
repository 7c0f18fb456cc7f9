#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlslab/config.hpp"
#include "nlslab/fit.hpp"

namespace nlslab {

/// A named scalar verdict: value compared against a frozen threshold.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "<=", "<", ">=", "==" or "true" (value is 0 or 1).
  std::string relation;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment_id;
  std::uint64_t seed = 0;
  /// Equation, grids and sweep descriptors actually used.
  nlohmann::ordered_json params;
  std::vector<DecayFit> fits;
  std::vector<Check> checks;
  std::map<std::string, double> scalars;
  /// Named sample series (time grids, drift histories).
  std::map<std::string, std::vector<double>> series;
  /// File names relative to the report directory; filled by write_report.
  std::vector<std::string> artifacts;

  bool all_pass() const;
  void add_check(std::string name, double value, std::string relation,
                 double threshold);
};

/// Parameters of a weighted Sobolev embedding
///   || |x|^alpha u ||_{L^q} <~ || |nabla|^s u ||_{L^p}.
struct EmbeddingTuple {
  int dim = 4;
  double p = 2.0;
  double q = 4.0;
  double s = 0.5;
  double alpha = 0.5;

  /// alpha > -d/q, 1/q <= 1/p <= 1/q + s, 0 < s < d, alpha + s = d(1/p - 1/q),
  /// and at most one of p = 1, p = inf, q = 1, q = inf, 1/p = 1/q + s.
  /// Throws std::invalid_argument naming the broken constraint.
  void validate() const;
};

/// Free decay of localized high-frequency data: the dispersive baseline, the
/// t- and N-scaling of || |nabla|^s S(t) chi_{<=10} P_{>=N} g ||_{L^r}, and
/// the rapid decay inside |x| <= M t / 10 for single-band data.
ExperimentReport run_linear_decay(const RunConfig& cfg);

/// Weighted Strichartz norms of localized free waves against
/// ||P_{>=N} g||_{H^{s_c}}, and the dyadic X(alpha, beta) norms of the
/// time-truncated nonlinear solution v, over a small (alpha, beta) scan.
ExperimentReport run_weighted_strichartz(const RunConfig& cfg);

/// || phi_1 |nabla|^sigma P_{<=M}(phi_2 f) ||_{L^q} / ||phi_2 f||_{L^r} as
/// the support separation A grows.
ExperimentReport run_mismatch(const RunConfig& cfg);

/// Scale invariance of || |x|^alpha u ||_{L^q} / || |nabla|^s u ||_{L^p}.
ExperimentReport run_embedding(const RunConfig& cfg);

/// The v/w splitting of rough compactly supported data: size of w, growth of
/// the critical norm of u, and smoothing of v away from t = 0.
ExperimentReport run_global_decomposition(const RunConfig& cfg);

/// Mass and energy drift of the split-step solver, its convergence order,
/// and agreement with Picard iteration.
ExperimentReport run_conservation(const RunConfig& cfg);

/// Dispatches on cfg.experiment_id. Errors from the suite are rethrown with
/// the experiment id and seed prepended: ConfigError for invalid parameters,
/// RunError for guard trips and solver failures.
ExperimentReport execute(const RunConfig& cfg);

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlslab
