#pragma once

#include <optional>

namespace nlslab {

/// i u_t + Delta u = mu c(t) |u|^p u, with c = chi_{<=threshold}(t) when a
/// time cutoff is present and c = 1 otherwise.
///
/// mu = +1 is defocusing, -1 focusing; mu = 0 is accepted as the linear
/// control (free flow through the same code path).
struct EquationParams {
  int dim = 4;
  double p = 0.9;
  int mu = 1;
  std::optional<double> time_cutoff;

  /// Critical regularity d/2 - 2/p; negative in the mass-subcritical range.
  double s_c() const noexcept { return 0.5 * dim - 2.0 / p; }
  /// c(t): 1, or the smooth time cutoff.
  double coupling(double t) const;
  /// Throws std::invalid_argument unless d >= 3, 0 < p < 4/d, mu in {-1,0,1},
  /// and any time cutoff is positive.
  void validate() const;

  bool operator==(const EquationParams&) const = default;
};

}  // namespace nlslab
