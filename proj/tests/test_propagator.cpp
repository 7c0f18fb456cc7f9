#include <doctest.h>

#include <cmath>

#include "nlslab/localization.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/propagator.hpp"

using namespace nlslab;

namespace {

double rel_l2(const RadialField& a, const RadialField& b) {
  return lebesgue_norm(a - b, 2) / lebesgue_norm(b, 2);
}

RadialField smooth_bump(const GridPtr& g) {
  return sample_radial(g, [](double r) { return cutoff_below(r, 1.0 / 1.1); }, Side::physical);
}

// Compact and smooth, with its spectrum concentrated at low frequency so the
// kernel quadrature on the physical nodes resolves the integrand.
RadialField wide_bump(const GridPtr& g) {
  return sample_radial(
      g, [](double r) { return std::exp(-r * r / 2) * cutoff_below(r, 6.0); }, Side::physical);
}

}  // namespace

TEST_CASE("free Gaussian spreads by the closed form") {
  // e^{-r^2/2} evolves to (1+2it)^{-d/2} exp(-r^2 / (2(1+2it))).
  const int d = 4;
  auto g = build_grid(d, 1024, 60.0);
  auto f = sample_radial(g, [](double r) { return std::exp(-r * r / 2); }, Side::physical);
  for (double t : {0.3, 1.0, 2.5, -1.7}) {
    auto u = evolve_free(f, t);
    const cplx z(1.0, 2.0 * t);
    auto exact = sample_radial(
        g, [&](double r) { return std::pow(z, -d / 2.0) * std::exp(-r * r / (2.0 * z)); },
        Side::physical);
    CAPTURE(t);
    CHECK(rel_l2(u, exact) <= 1e-9);
  }
}

TEST_CASE("unitarity, group law, identity, reversal") {
  auto g = build_grid(4, 1024, 60.0);
  auto f = sample_radial(g, [](double r) { return std::exp(-r * r / 4) * std::polar(1.0, r); },
                         Side::physical);
  const double m0 = lebesgue_norm(f, 2);
  for (double t = -100; t <= 100; t += 12.5) {
    CHECK(std::abs(lebesgue_norm(evolve_free(f, t), 2) - m0) <= 1e-10 * m0);
  }
  auto id = evolve_free(f, 0.0);
  CHECK(rel_l2(id, f) == 0.0);
  auto ab = evolve_free(evolve_free(f, 0.7), 1.9);
  CHECK(rel_l2(ab, evolve_free(f, 2.6)) <= 1e-10);
  auto lhs = evolve_free(conj(f), 1.3);
  auto rhs = conj(evolve_free(f, -1.3));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-12);
  // Frequency-side input comes back on the frequency side.
  CHECK(evolve_free(to_frequency(f), 1.0).side() == Side::frequency);
  CHECK_THROWS_AS(evolve_free(f, std::nan("")), std::invalid_argument);
}

TEST_CASE("batched evolution matches single evolutions") {
  auto g = build_grid(4, 256, 30.0);
  auto f = smooth_bump(g);
  std::vector<double> ts{0.0, 0.5, 1.0, 3.0, 7.0};
  auto many = evolve_free_many(f, ts);
  for (std::size_t k = 0; k < ts.size(); ++k) CHECK(rel_l2(many[k], evolve_free(f, ts[k])) <= 1e-13);
}

TEST_CASE("kernel quadrature agrees with the multiplier path") {
  auto g = build_grid(4, 2048, 64.0);
  auto f = wide_bump(g);
  for (double t : {0.25, 1.0, -1.0}) {
    CAPTURE(t);
    CHECK(rel_l2(kernel_evolve_oracle(f, t), evolve_free(f, t)) <= 1e-4);
  }
  auto zero = kernel_evolve_oracle(RadialField(g, Side::physical), 1.0);
  for (auto z : zero.values()) CHECK(z == cplx(0, 0));
  CHECK_THROWS_AS(kernel_evolve_oracle(f, 0.0), std::invalid_argument);
  auto wide = sample_radial(g, [](double r) { return r < 50 ? 1.0 : 0.0; }, Side::physical);
  CHECK_THROWS_AS(kernel_evolve_oracle(wide, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_evolve_oracle(to_frequency(f), 1.0), std::invalid_argument);
}

TEST_CASE("d = 3 kernel path on the half-integer grid") {
  auto g = build_grid(3, 2048, 64.0);
  auto f = wide_bump(g);
  CHECK(rel_l2(kernel_evolve_oracle(f, 0.5), evolve_free(f, 0.5)) <= 1e-4);
}
