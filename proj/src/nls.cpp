#include "nlslab/nls.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nlslab/error.hpp"
#include "nlslab/localization.hpp"
#include "nlslab/propagator.hpp"

namespace nlslab {

double EquationParams::coupling(double t) const {
  return time_cutoff ? cutoff_below(t, *time_cutoff) : 1.0;
}

void EquationParams::validate() const {
  if (dim < 3) throw std::invalid_argument("EquationParams: dimension must be >= 3");
  if (!(p > 0.0) || !(p < 4.0 / dim)) {
    throw std::invalid_argument("EquationParams: p = " + std::to_string(p) +
                                " violates the mass-subcritical range 0 < p < 4/d = " +
                                std::to_string(4.0 / dim));
  }
  if (mu < -1 || mu > 1) throw std::invalid_argument("EquationParams: mu must be -1, 0 or +1");
  if (time_cutoff && !(*time_cutoff > 0.0)) {
    throw std::invalid_argument("EquationParams: time cutoff must be positive");
  }
}

namespace {

// u <- u * exp(-i coeff |u|^p)
void nonlinear_phase(std::span<cplx> u, double p, double coeff) {
  for (auto& z : u) {
    const double amp = std::pow(std::norm(z), 0.5 * p);
    z *= std::polar(1.0, -coeff * amp);
  }
}

bool finite(std::span<const cplx> u) {
  for (const auto& z : u) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

std::vector<cplx> free_phase(std::span<const double> rho, double t) {
  std::vector<cplx> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::polar(1.0, -t * rho[i] * rho[i]);
  return out;
}

void multiply(std::span<cplx> f, const std::vector<cplx>& m) {
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= m[i];
}

// True when the nonlinearity is zero at every midpoint from t on.
bool switched_off(const EquationParams& params, double t_mid) {
  if (params.mu == 0) return true;
  return params.time_cutoff && t_mid >= 1.1 * *params.time_cutoff;
}

double high_sobolev(const RadialField& F, double N, double s) {
  const auto rho = F.nodes();
  const auto q = F.grid().quad_weights_freq();
  double sum = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double m = 1.0 - cutoff_below(rho[i], N);
    sum += q[i] * std::pow(rho[i], 2.0 * s) * m * m * std::norm(F[i]);
  }
  return std::sqrt(sum);
}

}  // namespace

double choose_cutoff_frequency(const RadialField& u0, double s_c, double delta0) {
  if (!(delta0 > 0.0)) {
    throw std::invalid_argument("choose_cutoff_frequency: delta0 must be positive (unreachable)");
  }
  require_finite(u0, "choose_cutoff_frequency");
  const RadialField F = on_side(u0, Side::frequency);
  const double kmax = u0.grid().freq_max();
  for (double N = 1.0; N <= kmax; N *= 2.0) {
    if (high_sobolev(F, N, s_c) <= delta0) return N;
  }
  throw std::invalid_argument(
      "choose_cutoff_frequency: smallness target unreachable below the grid cutoff");
}

SplitData split_initial_data(const RadialField& u0, double N, double delta0,
                             const EquationParams& params, double radius) {
  if (!(N > 0.0)) throw std::invalid_argument("split_initial_data: N must be positive");
  if (!(delta0 > 0.0)) throw std::invalid_argument("split_initial_data: delta0 must be positive");
  params.validate();
  const RadialField u = on_side(u0, Side::physical);
  const RadialField high = project(u, {N, BandKind::high});
  const double size = sobolev_norm(high, params.s_c());
  if (size > delta0) {
    throw std::invalid_argument("split_initial_data: ||P_{>=N} u0|| = " +
                                std::to_string(size) + " exceeds delta0 at N = " +
                                std::to_string(N));
  }
  RadialField v0 = apply_cutoff(high, {radius, CutoffKind::below});
  RadialField w0 = u - v0;
  return {u, std::move(v0), std::move(w0), N, delta0};
}

RadialField step(const RadialField& f, double t, double dt,
                 const EquationParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  params.validate();
  if (!f.all_finite()) throw SolverFailure(t, "non-finite field entering step");
  const double c = params.mu == 0 ? 0.0 : params.coupling(t + 0.5 * dt);
  if (c == 0.0) return evolve_free(f, dt);
  RadialField u = on_side(evolve_free(f, 0.5 * dt), Side::physical);
  nonlinear_phase(u.values(), params.p, params.mu * c * dt);
  if (!u.all_finite()) throw SolverFailure(t, "non-finite values after nonlinear phase");
  return on_side(evolve_free(u, 0.5 * dt), f.side());
}

Trajectory simulate(const RadialField& f0, const EquationParams& params,
                    double horizon, std::span<const double> schedule,
                    const SimulationOptions& opts) {
  params.validate();
  require_finite(f0, "simulate");
  if (!(opts.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("simulate: horizon must be >= 0");
  if (schedule.empty()) throw std::invalid_argument("simulate: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 0.0 || schedule[k] > horizon + 1e-12 ||
        (k > 0 && !(schedule[k] > schedule[k - 1]))) {
      throw std::invalid_argument("simulate: schedule must increase inside [0, horizon]");
    }
  }

  const auto& grid = f0.grid();
  const GridPtr gp = f0.grid_ptr();
  const std::size_t n = grid.size();
  const auto rho = grid.rho_nodes();
  const double guard_r = opts.guard_radius * grid.radius_max();

  Trajectory traj;
  traj.params = params;
  RadialField u = on_side(f0, Side::physical);
  double t = 0.0;

  auto record = [&](double s) {
    if (opts.guard) {
      const double frac = mass_fraction_beyond(u, guard_r);
      if (frac > opts.guard_threshold) throw GuardTripped(s, frac, opts.guard_threshold);
    }
    traj.push(s, u);
  };

  std::vector<cplx> F(n), tmp(n);
  for (const double s : schedule) {
    if (s == t) {
      record(s);
      continue;
    }
    if (switched_off(params, t)) {
      u = evolve_free(u, s - t);
      t = s;
      record(s);
      continue;
    }
    const auto m = static_cast<std::size_t>(std::ceil((s - t) / opts.dt - 1e-9));
    const double h = (s - t) / static_cast<double>(m);
    const auto half = free_phase(rho, 0.5 * h);
    const auto full = free_phase(rho, h);

    // Invariant at the top of iteration k: F = S(h/2) u(t + k h), frequency side.
    grid.forward(u.values(), F);
    multiply(F, half);
    for (std::size_t k = 0; k < m; ++k) {
      const double tk = t + static_cast<double>(k) * h;
      if (switched_off(params, tk + 0.5 * h)) {
        multiply(F, free_phase(rho, s - tk - 0.5 * h));
        break;
      }
      grid.inverse(F, tmp);
      nonlinear_phase(tmp, params.p, params.mu * params.coupling(tk + 0.5 * h) * h);
      if (!finite(tmp)) throw SolverFailure(tk, "non-finite values after nonlinear phase");
      grid.forward(tmp, F);
      multiply(F, k + 1 < m ? full : half);
    }
    RadialField next(gp, Side::physical);
    grid.inverse(F, next.values());
    if (!next.all_finite()) throw SolverFailure(s, "non-finite values");
    u = std::move(next);
    t = s;
    record(s);
  }
  return traj;
}

ConservedQuantities conserved_quantities(const RadialField& f,
                                         const EquationParams& params) {
  const RadialField u = on_side(f, Side::physical);
  require_finite(u, "conserved_quantities");
  const auto& grid = u.grid();
  const auto r = grid.r_nodes();
  const auto qs = grid.quad_weights_space();
  const std::size_t n = u.size();

  ConservedQuantities out;
  double potential = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = std::norm(u[i]);
    out.mass += qs[i] * a2;
    potential += qs[i] * std::pow(a2, 0.5 * params.p + 1.0);
  }
  const double grad = sobolev_norm(u, 1.0);
  out.energy = grad * grad + 2.0 * params.mu / (params.p + 2.0) * potential;

  // u_r by three-point differences on the nonuniform nodes.
  for (std::size_t i = 0; i < n; ++i) {
    cplx du;
    if (i == 0) {
      du = (u[1] - u[0]) / (r[1] - r[0]);
    } else if (i + 1 == n) {
      du = (u[i] - u[i - 1]) / (r[i] - r[i - 1]);
    } else {
      const double hl = r[i] - r[i - 1];
      const double hr = r[i + 1] - r[i];
      du = (u[i + 1] * hl * hl - u[i - 1] * hr * hr + u[i] * (hr * hr - hl * hl)) /
           (hl * hr * (hl + hr));
    }
    out.momentum_residual += qs[i] * std::abs((std::conj(u[i]) * du).imag());
  }
  return out;
}

DuhamelResult duhamel_iterate(const RadialField& f0, const EquationParams& params,
                              double T, int iterations, int time_steps) {
  params.validate();
  require_finite(f0, "duhamel_iterate");
  if (!(T > 0.0)) throw std::invalid_argument("duhamel_iterate: T must be positive");
  if (iterations < 2) throw std::invalid_argument("duhamel_iterate: need >= 2 iterations");
  if (time_steps < 1) throw std::invalid_argument("duhamel_iterate: need >= 1 time step");

  const auto& grid = f0.grid();
  const std::size_t n = grid.size();
  const std::size_t nt = static_cast<std::size_t>(time_steps) + 1;
  const double h = T / time_steps;
  const auto rho = grid.rho_nodes();
  const auto qf = grid.quad_weights_freq();
  const RadialField F0 = on_side(f0, Side::frequency);

  // Frequency-side iterate V[j] and its physical image u[j] at t_j = j h.
  std::vector<cplx> V(n * nt), u(n * nt), G(n * nt), Vnew(n * nt);
  for (std::size_t j = 0; j < nt; ++j) {
    const double tj = static_cast<double>(j) * h;
    for (std::size_t i = 0; i < n; ++i) {
      V[j * n + i] = F0[i] * std::polar(1.0, -tj * rho[i] * rho[i]);
    }
  }
  grid.inverse(V, u, nt);

  DuhamelResult result{{}, RadialField(f0.grid_ptr(), Side::physical)};
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t k = 0; k < n * nt; ++k) {
      u[k] *= std::pow(std::norm(u[k]), 0.5 * params.p);
    }
    grid.forward(u, G, nt);
    // Interaction picture: integrate S(-s) c(s) N(u(s)) by the trapezoid rule.
    std::vector<cplx> acc(n, cplx(0.0, 0.0)), prev(n);
    double dist = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double tj = static_cast<double>(j) * h;
      const double c = params.mu * params.coupling(tj);
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const cplx phase = std::polar(1.0, tj * rho[i] * rho[i]);
        const cplx g = c * phase * G[j * n + i];
        if (j > 0) acc[i] += 0.5 * h * (prev[i] + g);
        prev[i] = g;
        const cplx v = std::conj(phase) * (F0[i] - cplx(0.0, 1.0) * acc[i]);
        Vnew[j * n + i] = v;
        d2 += qf[i] * std::norm(v - V[j * n + i]);
      }
      dist = std::max(dist, std::sqrt(d2));
    }
    if (!finite(Vnew)) throw SolverFailure(T, "non-finite Picard iterate");
    if (!result.distances.empty() && dist > 1e3 * result.distances.front() &&
        result.distances.front() > 0.0) {
      throw SolverFailure(T, "Picard iteration diverged (distance grew beyond 1e3x)");
    }
    result.distances.push_back(dist);
    V.swap(Vnew);
    grid.inverse(V, u, nt);
  }
  std::copy(u.end() - static_cast<std::ptrdiff_t>(n), u.end(),
            result.final_state.values().begin());
  return result;
}

RadialField rough_data(const GridPtr& grid, const EquationParams& params,
                       std::span<const double> bands, std::uint64_t seed,
                       double amplitude, double support) {
  params.validate();
  if (bands.empty()) throw std::invalid_argument("rough_data: no bands");
  std::mt19937_64 rng(seed);
  RadialField sum(grid, Side::physical);
  for (const double M : bands) {
    if (!(M > 0.0) || 2.2 * M > grid->freq_max()) {
      throw std::invalid_argument("rough_data: band " + std::to_string(M) +
                                  " does not fit below the grid cutoff");
    }
    const BandSpec spec{M, BandKind::band};
    RadialField phi = to_space(sample_radial(
        grid, [&](double rho) { return spec.multiplier(rho); }, Side::frequency));
    const double sign = (rng() >> 63) ? -1.0 : 1.0;
    phi *= sign * std::pow(M, -params.s_c()) / lebesgue_norm(phi, 2.0);
    sum += phi;
  }
  return apply_cutoff(amplitude * sum, {support, CutoffKind::below});
}

}  // namespace nlslab
