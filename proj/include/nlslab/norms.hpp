#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nlslab/equation.hpp"
#include "nlslab/radial_grid.hpp"

namespace nlslab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (int |f|^r dx)^{1/r} by node quadrature; r = inf gives the node-wise max
/// modulus, a lower bound for the true sup.
double lebesgue_norm(const RadialField& f, double r);

/// || |x|^alpha f ||_{L^q}.
double weighted_lebesgue_norm(const RadialField& f, double q, double alpha);

/// |nabla|^s f, the multiplier rho^s. Requires s > -d/2.
RadialField apply_fractional(const RadialField& f, double s);

/// || |nabla|^s f ||_{L^2}, computed on the frequency side.
double sobolev_norm(const RadialField& f, double s);

/// || |nabla|^s f ||_{L^r}: multiplier, then back to physical space.
double fractional_lebesgue_norm(const RadialField& f, double s, double r);

struct WeightSpec {
  double alpha = 1.0;
  double beta = 0.0;

  /// alpha >= 1, beta >= 0 (beta = 0 is the unweighted limit).
  void validate() const;
  double product() const noexcept { return alpha * beta; }
  /// (1 + t^{2 alpha} rho^2)^{beta/2}
  double multiplier(double t, double rho) const;
};

/// <t^alpha |nabla|>^beta f.
RadialField apply_weight(const RadialField& f, double t, const WeightSpec& w);

/// Time-ordered physical-side snapshots on one grid.
struct Trajectory {
  EquationParams params;
  std::vector<double> times;
  std::vector<RadialField> snapshots;

  void validate() const;
  void push(double t, RadialField f);
  std::size_t size() const noexcept { return times.size(); }
};

/// (int ||u(t)||_{L^r}^q dt)^{1/q}, trapezoid in t; q = inf takes the max.
double mixed_norm(const Trajectory& traj, double q, double r);

/// Time part of a mixed norm from precomputed spatial norms.
double time_norm(std::span<const double> times, std::span<const double> values,
                 double q);

struct StrichartzTriple {
  double q = 2.0;
  double r = 4.0;
  double gamma = 0.0;
};

enum class TripleCondition { none, q_at_least_2, r_above_2, radial_gap, scaling };

struct TripleVerdict {
  bool admissible = true;
  TripleCondition violated = TripleCondition::none;
  std::string message;
};

/// Radial Strichartz conditions: q >= 2, r > 2,
/// 2/q + (2d-1)/r < (2d-1)/2, and 2/q + d/r = d/2 + gamma. Reports the first
/// violated condition.
TripleVerdict validate_triple(const StrichartzTriple& tr, int d);

}  // namespace nlslab
