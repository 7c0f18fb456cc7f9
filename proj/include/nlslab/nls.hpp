#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlslab/equation.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/radial_grid.hpp"

namespace nlslab {

/// u0 = v0 + w0 with v0 = chi_{<=10}(P_{>=N} u0) small in H^{s_c}.
struct SplitData {
  RadialField u0;
  RadialField v0;
  RadialField w0;
  double N = 1.0;
  double delta0 = 0.0;
};

struct ConservedQuantities {
  double mass = 0.0;
  double energy = 0.0;
  /// The momentum vector of a radial field vanishes by symmetry.
  double momentum = 0.0;
  /// int |Im(conj(u) u_r)| dx, the size of the local current. Zero for
  /// real-valued data; reported so the symmetry claim stays checkable.
  double momentum_residual = 0.0;
};

/// Smallest dyadic N = 2^k, k >= 0, with ||P_{>=N} u0||_{H^{s_c}} <= delta0.
/// Throws std::invalid_argument when delta0 <= 0 or no N below the grid's
/// frequency cutoff qualifies.
double choose_cutoff_frequency(const RadialField& u0, double s_c, double delta0);

/// Builds the split at N; throws std::invalid_argument if the smallness bound
/// fails there. `radius` is the spatial cutoff applied to the high part.
SplitData split_initial_data(const RadialField& u0, double N, double delta0,
                             const EquationParams& params, double radius = 10.0);

/// One Strang step: half free flow, phase e^{-i mu c(t+dt/2) |f|^p dt}, half
/// free flow. Output on the input side.
RadialField step(const RadialField& f, double t, double dt,
                 const EquationParams& params);

struct SimulationOptions {
  double dt = 1e-3;
  bool guard = true;
  double guard_threshold = 1e-6;
  /// Guard watches mass beyond this fraction of R.
  double guard_radius = 0.9;
};

/// Integrates from t = 0 and records snapshots at `schedule` (increasing, in
/// [0, horizon]). Between snapshots the step is the largest h <= dt that
/// lands on the next snapshot. Once a time cutoff has switched the
/// nonlinearity off for good, the rest is exact free evolution.
/// Throws GuardTripped or SolverFailure.
Trajectory simulate(const RadialField& f0, const EquationParams& params,
                    double horizon, std::span<const double> schedule,
                    const SimulationOptions& opts = {});

ConservedQuantities conserved_quantities(const RadialField& f,
                                         const EquationParams& params);

struct DuhamelResult {
  /// sup_t ||u^{(k+1)}(t) - u^{(k)}(t)||_{L^2} for k = 0, 1, ...
  std::vector<double> distances;
  /// Final iterate at t = T.
  RadialField final_state;
};

/// Picard iteration u^{(k+1)} = S(t) f0 - i mu int_0^t S(t-s) c(s) |u^{(k)}|^p
/// u^{(k)} ds on a uniform grid of `time_steps` intervals, trapezoid rule in
/// the interaction picture. Starts from u^{(0)} = S(t) f0. Throws
/// SolverFailure if a distance exceeds 1e3 times the first one.
DuhamelResult duhamel_iterate(const RadialField& f0, const EquationParams& params,
                              double T, int iterations, int time_steps);

/// Compactly supported data with prescribed H^{s_c} size per dyadic band:
///   chi_{<=a}(r) * sum_M eps_M M^{-s_c} phi_M,
/// phi_M the unit-L^2 inverse transform of the annulus multiplier at M, eps_M
/// independent random signs from `seed`. With a = 10/11 the support is in
/// the unit ball.
RadialField rough_data(const GridPtr& grid, const EquationParams& params,
                       std::span<const double> bands, std::uint64_t seed,
                       double amplitude = 1.0, double support = 10.0 / 11.0);

}  // namespace nlslab
