#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlslab/localization.hpp"
#include "nlslab/norms.hpp"
#include "nlslab/propagator.hpp"

using namespace nlslab;

namespace {

double ball_volume(int d, double a) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1) * std::pow(a, d);
}

}  // namespace

TEST_CASE("Lebesgue norms against the ball-volume oracle") {
  const int d = 4;
  auto g = build_grid(d, 4096, 4.0);
  auto zero = RadialField(g, Side::physical);
  CHECK(lebesgue_norm(zero, 3.0) == 0.0);
  auto plateau = sample_radial(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; }, Side::physical);
  for (double r : {1.0, 2.0, 4.0}) {
    CAPTURE(r);
    CHECK(lebesgue_norm(plateau, r) ==
          doctest::Approx(std::pow(ball_volume(d, 1.0), 1.0 / r)).epsilon(5e-3));
  }
  CHECK(lebesgue_norm(plateau, kInf) == 1.0);
  // Smooth plateau: sandwiched between the balls of radius a and 1.1a.
  auto smooth = sample_radial(g, [](double r) { return cutoff_below(r, 1.0); }, Side::physical);
  for (double r : {1.5, 2.0, 6.0}) {
    const double v = std::pow(lebesgue_norm(smooth, r), r);
    CHECK(v >= ball_volume(d, 1.0) * (1 - 1e-3));
    CHECK(v <= ball_volume(d, 1.1) * (1 + 1e-3));
  }
  CHECK_THROWS_AS(lebesgue_norm(plateau, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lebesgue_norm(to_frequency(smooth), 2.0), std::invalid_argument);
}

TEST_CASE("critical Sobolev norm is invariant under the equation's scaling") {
  const int d = 4;
  const double p = 0.9, sc = d / 2.0 - 2.0 / p;
  auto g = build_grid(d, 4096, 200.0);
  auto base = [](double r) { return std::exp(-r * r / 2) * (1 + 0.3 * r * r); };
  const double ref = sobolev_norm(sample_radial(g, base, Side::physical), sc);
  for (double lam : {0.5, 2.0, 3.0}) {
    auto f = sample_radial(
        g, [&](double r) { return std::pow(lam, 2.0 / p) * base(lam * r); }, Side::physical);
    CAPTURE(lam);
    CHECK(sobolev_norm(f, sc) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("fractional multipliers") {
  auto g = build_grid(4, 1024, 40.0);
  auto f = project(sample_radial(g, [](double r) { return std::exp(-r * r / 3); }, Side::physical),
                   {0.5, BandKind::high});
  auto same = apply_fractional(f, 0.0);
  CHECK(lebesgue_norm(same - f, 2) == 0.0);
  auto back = apply_fractional(apply_fractional(f, 0.7), -0.7);
  CHECK(lebesgue_norm(back - f, 2) <= 1e-8 * lebesgue_norm(f, 2));
  CHECK(sobolev_norm(f, 0.0) == doctest::Approx(lebesgue_norm(f, 2.0)).epsilon(1e-8));
  CHECK_THROWS_AS(apply_fractional(f, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(sobolev_norm(f, -2.5), std::invalid_argument);
  // s_c for (d, p) = (4, 0.9) on a high-frequency bump gives a finite value.
  auto band = project(f, {4.0, BandKind::band});
  CHECK(std::isfinite(sobolev_norm(band, -2.0 / 9.0)));
  // Dyadic bump at M: M^s times its mass, up to the annulus width.
  for (double s : {-0.5, 0.5, 1.0}) {
    const double M = 4.0, mass = lebesgue_norm(band, 2.0);
    const double v = sobolev_norm(band, s);
    CHECK(v >= std::min(std::pow(M, s), std::pow(2.2 * M, s)) * mass * (1 - 1e-9));
    CHECK(v <= std::max(std::pow(M, s), std::pow(2.2 * M, s)) * mass * (1 + 1e-9));
  }
  CHECK(fractional_lebesgue_norm(f, 0.0, 2.0) == doctest::Approx(lebesgue_norm(f, 2.0)));
}

TEST_CASE("space-time weight") {
  auto g = build_grid(4, 512, 30.0);
  auto f = sample_radial(g, [](double r) { return std::exp(-r * r); }, Side::physical);
  const WeightSpec w{1.5, 0.3};
  CHECK(lebesgue_norm(apply_weight(f, 0.0, w) - f, 2) == 0.0);
  CHECK(lebesgue_norm(apply_weight(f, 3.0, {1.0, 0.0}) - f, 2) == 0.0);
  const double t = 40.0, rho = 5.0;
  CHECK(w.multiplier(t, rho) ==
        doctest::Approx(std::pow(t, w.alpha * w.beta) * std::pow(rho, w.beta)).epsilon(1e-6));
  auto F = to_frequency(apply_weight(f, 2.0, w));
  auto F0 = to_frequency(f);
  for (std::size_t i = 0; i < F.size(); i += 37) {
    CHECK(std::abs(F[i] - w.multiplier(2.0, g->rho_nodes()[i]) * F0[i]) <=
          1e-9 * std::abs(F0[0]));
  }
  CHECK_THROWS_AS(apply_weight(f, 1.0, {0.5, 0.2}), std::invalid_argument);
}

TEST_CASE("mixed norms") {
  auto g = build_grid(4, 512, 30.0);
  auto f = sample_radial(g, [](double r) { return std::exp(-r * r); }, Side::physical);
  const double c = lebesgue_norm(f, 3.0);
  Trajectory traj;
  for (int k = 0; k <= 8; ++k) traj.push(0.5 * k, f);
  for (double q : {1.0, 2.0, 4.0}) {
    CHECK(mixed_norm(traj, q, 3.0) == doctest::Approx(c * std::pow(4.0, 1.0 / q)).epsilon(1e-12));
  }
  Trajectory grow;
  for (int k = 0; k < 5; ++k) grow.push(k, (k + 1.0) * f);
  CHECK(mixed_norm(grow, kInf, 2.0) == doctest::Approx(5 * lebesgue_norm(f, 2.0)));
  CHECK_THROWS_AS(mixed_norm(Trajectory{}, 2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(traj.push(1.0, f), std::invalid_argument);
}

TEST_CASE("free-flow Strichartz norm converges under time refinement") {
  auto g = build_grid(4, 1024, 60.0);
  auto f = sample_radial(g, [](double r) { return cutoff_below(r, 1.0 / 1.1); }, Side::physical);
  std::vector<double> values;
  for (int n : {50, 100, 200, 400}) {
    std::vector<double> ts;
    for (int k = 0; k <= n; ++k) ts.push_back(2.0 * k / n);
    Trajectory traj;
    traj.times = ts;
    traj.snapshots = evolve_free_many(f, ts);
    values.push_back(mixed_norm(traj, 2.0, 4.0));
  }
  CHECK(std::isfinite(values.back()));
  CHECK(std::abs(values[3] - values[2]) <= 0.01 * values[3]);
  // First order or better: successive differences shrink by at least 2.
  CHECK(std::abs(values[3] - values[2]) <= 0.5 * std::abs(values[2] - values[1]) + 1e-12);
}

TEST_CASE("Strichartz triple admissibility") {
  CHECK(validate_triple({2, 4, 0}, 4).admissible);
  auto v = validate_triple({2, 2, 0}, 4);
  CHECK_FALSE(v.admissible);
  CHECK(v.violated == TripleCondition::r_above_2);
  CHECK(validate_triple({2, 2, 0.3}, 3).violated == TripleCondition::r_above_2);
  CHECK(validate_triple({2, 4, 0.5}, 4).violated == TripleCondition::scaling);
  CHECK(validate_triple({1.5, 4, 0}, 4).violated == TripleCondition::q_at_least_2);
  // 2/q + 7/r < 7/2 fails for r close to 2.
  CHECK(validate_triple({2, 2.5, 0.6}, 4).violated == TripleCondition::radial_gap);
  CHECK(validate_triple({kInf, 2.5, -0.4}, 4).admissible);
}
