#include "nlslab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlslab {
namespace {

void check_exponent(double r, const char* who) {
  if (!(r >= 1.0)) throw std::invalid_argument(std::string(who) + ": exponent must be >= 1");
}

}  // namespace

double lebesgue_norm(const RadialField& f, double r) {
  return weighted_lebesgue_norm(f, r, 0.0);
}

double weighted_lebesgue_norm(const RadialField& f, double q, double alpha) {
  require_side(f, Side::physical, "lebesgue_norm");
  check_exponent(q, "lebesgue_norm");
  const auto x = f.grid().r_nodes();
  const auto w = f.grid().quad_weights_space();
  if (std::isinf(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      m = std::max(m, std::abs(f[i]) * std::pow(x[i], alpha));
    }
    return m;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]) * (alpha == 0.0 ? 1.0 : std::pow(x[i], alpha));
    sum += w[i] * (q == 2.0 ? a * a : std::pow(a, q));
  }
  return std::pow(sum, 1.0 / q);
}

RadialField apply_fractional(const RadialField& f, double s) {
  if (!(s > -0.5 * f.grid().dim())) {
    throw std::invalid_argument("apply_fractional: order must exceed -d/2");
  }
  if (s == 0.0) return f;
  return apply_multiplier(f, [s](double rho) { return std::pow(rho, s); });
}

double sobolev_norm(const RadialField& f, double s) {
  if (!(s > -0.5 * f.grid().dim())) {
    throw std::invalid_argument("sobolev_norm: order must exceed -d/2");
  }
  const RadialField g = on_side(f, Side::frequency);
  const auto rho = g.nodes();
  const auto w = g.grid().quad_weights_freq();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    sum += w[i] * std::pow(rho[i], 2.0 * s) * std::norm(g[i]);
  }
  return std::sqrt(sum);
}

double fractional_lebesgue_norm(const RadialField& f, double s, double r) {
  return lebesgue_norm(on_side(apply_fractional(f, s), Side::physical), r);
}

void WeightSpec::validate() const {
  if (!(alpha >= 1.0)) throw std::invalid_argument("WeightSpec: alpha must be >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("WeightSpec: beta must be >= 0");
}

double WeightSpec::multiplier(double t, double rho) const {
  const double x = std::pow(std::abs(t), alpha) * rho;
  return std::pow(1.0 + x * x, 0.5 * beta);
}

RadialField apply_weight(const RadialField& f, double t, const WeightSpec& w) {
  w.validate();
  if (t == 0.0 || w.beta == 0.0) return f;
  return apply_multiplier(f, [&](double rho) { return w.multiplier(t, rho); });
}

void Trajectory::validate() const {
  if (times.empty()) throw std::invalid_argument("Trajectory: empty");
  if (times.size() != snapshots.size()) {
    throw std::invalid_argument("Trajectory: times and snapshots differ in length");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("Trajectory: times must be strictly increasing");
    }
    if (snapshots[k].grid_ptr() != snapshots[0].grid_ptr()) {
      throw std::invalid_argument("Trajectory: snapshots on different grids");
    }
  }
}

void Trajectory::push(double t, RadialField f) {
  if (!times.empty() && !(t > times.back())) {
    throw std::invalid_argument("Trajectory: times must be strictly increasing");
  }
  times.push_back(t);
  snapshots.push_back(on_side(f, Side::physical));
}

double time_norm(std::span<const double> times, std::span<const double> values,
                 double q) {
  if (times.size() != values.size() || times.empty()) {
    throw std::invalid_argument("time_norm: need equal-length, non-empty samples");
  }
  check_exponent(q, "time_norm");
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  if (times.size() < 2) throw std::invalid_argument("time_norm: need >= 2 samples");
  double sum = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    sum += 0.5 * dt * (std::pow(values[k], q) + std::pow(values[k - 1], q));
  }
  return std::pow(sum, 1.0 / q);
}

double mixed_norm(const Trajectory& traj, double q, double r) {
  traj.validate();
  if (!std::isinf(q) && traj.size() < 2) {
    throw std::invalid_argument("mixed_norm: need >= 2 snapshots");
  }
  std::vector<double> spatial(traj.size());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < traj.size(); ++k) {
    spatial[k] = lebesgue_norm(traj.snapshots[k], r);
  }
  return time_norm(traj.times, spatial, q);
}

TripleVerdict validate_triple(const StrichartzTriple& tr, int d) {
  const double inv_q = std::isinf(tr.q) ? 0.0 : 1.0 / tr.q;
  const double inv_r = std::isinf(tr.r) ? 0.0 : 1.0 / tr.r;
  TripleVerdict v;
  auto fail = [&](TripleCondition c, const char* msg) {
    v.admissible = false;
    v.violated = c;
    v.message = msg;
    return v;
  };
  if (!(tr.q >= 2.0)) return fail(TripleCondition::q_at_least_2, "q >= 2 fails");
  if (!(tr.r > 2.0)) return fail(TripleCondition::r_above_2, "r > 2 fails");
  if (!(2.0 * inv_q + (2.0 * d - 1.0) * inv_r < 0.5 * (2.0 * d - 1.0))) {
    return fail(TripleCondition::radial_gap, "2/q + (2d-1)/r < (2d-1)/2 fails");
  }
  if (std::abs(2.0 * inv_q + d * inv_r - (0.5 * d + tr.gamma)) > 1e-12) {
    return fail(TripleCondition::scaling, "2/q + d/r = d/2 + gamma fails");
  }
  return v;
}

}  // namespace nlslab
