#include "nlslab/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nlslab/bessel.hpp"

namespace nlslab {
namespace {

void require_finite_time(double t, const char* who) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument(std::string(who) + ": time must be finite");
  }
}

}  // namespace

RadialField evolve_free(const RadialField& f, double t) {
  require_finite_time(t, "evolve_free");
  require_finite(f, "evolve_free");
  if (t == 0.0) return f;
  return apply_multiplier(f, [t](double rho) {
    return std::polar(1.0, -t * rho * rho);
  });
}

std::vector<RadialField> evolve_free_many(const RadialField& f,
                                          std::span<const double> times) {
  require_finite(f, "evolve_free_many");
  for (double t : times) require_finite_time(t, "evolve_free_many");
  const RadialField g = on_side(f, Side::frequency);
  const auto& grid = g.grid();
  const std::size_t n = grid.size();
  const auto rho = grid.rho_nodes();
  std::vector<cplx> batch(n * times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      batch[k * n + i] = g[i] * std::polar(1.0, -times[k] * rho[i] * rho[i]);
    }
  }
  std::vector<cplx> out(batch.size());
  grid.inverse(batch, out, times.size());
  std::vector<RadialField> result;
  result.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    result.emplace_back(g.grid_ptr(), Side::physical,
                        std::vector<cplx>(out.begin() + k * n,
                                          out.begin() + (k + 1) * n));
  }
  return result;
}

RadialField kernel_evolve_oracle(const RadialField& f, double t) {
  require_side(f, Side::physical, "kernel_evolve_oracle");
  require_finite(f, "kernel_evolve_oracle");
  require_finite_time(t, "kernel_evolve_oracle");
  if (t == 0.0) {
    throw std::invalid_argument("kernel_evolve_oracle: kernel is singular at t = 0");
  }
  const auto& grid = f.grid();
  if (mass_fraction_beyond(f, 0.5 * grid.radius_max()) > 1e-12) {
    throw std::invalid_argument(
        "kernel_evolve_oracle: support too close to the grid boundary");
  }
  const int d = grid.dim();
  const double nu = grid.order();
  const auto r = grid.r_nodes();
  const auto qs = grid.quad_weights_space();

  // Source nodes carrying the data, with everything that does not depend on
  // the output radius folded in.
  std::vector<double> src_r;
  std::vector<cplx> src_w;
  const double ft_const = std::pow(2.0 * std::numbers::pi, 0.5 * d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == cplx(0.0, 0.0)) continue;
    src_r.push_back(r[i]);
    src_w.push_back(qs[i] / grid.sphere_area() * ft_const *
                    std::polar(1.0, r[i] * r[i] / (4.0 * t)) * f[i]);
  }
  // (4 pi i t)^{-d/2} with the principal branch of i^{-d/2}.
  const cplx prefactor =
      std::pow(4.0 * std::numbers::pi * std::abs(t), -0.5 * d) *
      std::polar(1.0, -0.25 * std::numbers::pi * d * (t > 0 ? 1.0 : -1.0));

  RadialField out(f.grid_ptr(), Side::physical);
  const std::size_t n = out.size();
  const std::size_t m = src_r.size();
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < n; ++j) {
    const double k = r[j] / (2.0 * t);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      acc += bessel::j_scaled(nu, std::abs(k) * src_r[i]) * src_w[i];
    }
    out[j] = prefactor * std::polar(1.0, r[j] * r[j] / (4.0 * t)) * acc;
  }
  return out;
}

}  // namespace nlslab
