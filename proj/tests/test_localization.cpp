#include <doctest.h>

#include <cmath>

#include "nlslab/localization.hpp"
#include "nlslab/norms.hpp"

using namespace nlslab;

TEST_CASE("cutoff profile: plateau, tail, monotone transition") {
  CHECK(cutoff_below(0.3, 1.0) == 1.0);
  CHECK(cutoff_below(1.0, 1.0) == 1.0);
  CHECK(cutoff_below(1.1, 1.0) == 0.0);
  CHECK(cutoff_below(5.0, 1.0) == 0.0);
  double prev = 1.0;
  for (double x = 1.0; x <= 1.1; x += 0.001) {
    const double v = cutoff_below(x, 1.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(cutoff_below(1.05, 1.0) == doctest::Approx(0.5));
  CutoffSpec above{2.0, CutoffKind::above};
  CutoffSpec below{2.0, CutoffKind::below};
  for (double x : {0.0, 1.9, 2.1, 2.15, 3.0}) CHECK(above.profile(x) + below.profile(x) == 1.0);
  CHECK_THROWS_AS((CutoffSpec{0.0, CutoffKind::below}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CutoffSpec{2.0, CutoffKind::band, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("time cutoff") {
  CHECK(apply_time_cutoff(0.5, 1.0) == 1.0);
  CHECK(apply_time_cutoff(1.2, 1.0) == 0.0);
  const double a = apply_time_cutoff(1.05, 1.0);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  CHECK(apply_time_cutoff(1.06, 1.0) < a);
  CHECK(apply_time_cutoff(-0.5, 1.0) == 1.0);
  CHECK_THROWS_AS(apply_time_cutoff(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("spatial cutoffs act pointwise and partition unity") {
  auto g = build_grid(4, 512, 30.0);
  auto f = sample_radial(g, [](double r) { return r < 5 ? std::cos(r) * (5 - r) : 0.0; },
                         Side::physical);
  auto kept = apply_cutoff(f, {10.0, CutoffKind::below});
  CHECK(std::vector<cplx>(kept.values().begin(), kept.values().end()) ==
        std::vector<cplx>(f.values().begin(), f.values().end()));
  auto lo = apply_cutoff(f, {2.0, CutoffKind::below});
  auto hi = apply_cutoff(f, {2.0, CutoffKind::above});
  auto sum = lo + hi;
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(sum[i] - f[i]) <= 1e-15 * std::abs(f[i]) + 1e-300);
  CHECK_THROWS_AS(apply_cutoff(to_frequency(f), {2.0, CutoffKind::below}), std::invalid_argument);
}

TEST_CASE("Littlewood-Paley projectors") {
  auto g = build_grid(4, 1024, 40.0);
  auto f = sample_radial(g, [](double r) { return r < 1 ? std::pow(1 - r * r, 2) : 0.0; },
                         Side::physical);
  SUBCASE("low + high = identity") {
    auto lo = project(f, {4.0, BandKind::low});
    auto hi = project(f, {4.0, BandKind::high});
    CHECK(lo.side() == Side::physical);
    auto sum = lo + hi;
    double err = 0, peak = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(sum[i] - f[i]));
      peak = std::max(peak, std::abs(f[i]));
    }
    CHECK(err <= 1e-12 * peak);
  }
  SUBCASE("band support and locality") {
    for (double N : {1.0, 2.0, 4.0, 8.0}) {
      auto pn = project(f, {N, BandKind::band});
      CHECK(frequency_mass_fraction(pn, 0.9 * N, 2.2 * N) >= 1 - 1e-10);
      auto F = to_frequency(pn);
      for (std::size_t i = 0; i < F.size(); ++i) {
        const double rho = g->rho_nodes()[i];
        if (rho < N || rho > 2.2 * N) CHECK(std::abs(F[i]) <= 1e-10);
      }
    }
  }
  SUBCASE("P_N P_N is the squared multiplier") {
    const BandSpec b{2.0, BandKind::band};
    auto twice = to_frequency(project(project(f, b), b));
    auto F = to_frequency(f);
    for (std::size_t i = 0; i < F.size(); ++i) {
      const double m = b.multiplier(g->rho_nodes()[i]);
      CHECK(std::abs(twice[i] - m * m * F[i]) <= 1e-10 * (std::abs(F[0]) + 1));
    }
  }
  SUBCASE("dyadic bands tile") {
    auto sum = RadialField(g, Side::frequency);
    for (double M = 1; M <= 8; M *= 2) sum += to_frequency(project(f, {M, BandKind::band}));
    auto lo16 = to_frequency(project(f, {16.0, BandKind::low}));
    auto lo1 = to_frequency(project(f, {1.0, BandKind::low}));
    for (std::size_t i = 0; i < sum.size(); ++i) CHECK(std::abs(sum[i] - (lo16[i] - lo1[i])) <= 1e-10);
  }
  SUBCASE("high-frequency tail shrinks with N") {
    double prev = 1e300;
    for (double N = 1; N <= 32; N *= 2) {
      const double v = sobolev_norm(project(f, {N, BandKind::high}), -2.0 / 9.0);
      CHECK(v < prev);
      prev = v;
    }
  }
  CHECK_THROWS_AS(project(f, {0.0, BandKind::low}), std::invalid_argument);
  CHECK_THROWS_AS(project(f, {-2.0, BandKind::band}), std::invalid_argument);
}

TEST_CASE("spatial cutoffs are bounded on fractional Sobolev spaces uniformly in a") {
  auto g = build_grid(4, 2048, 64.0);
  for (double gamma : {0.25, 0.5}) {
    double worst = 0;
    for (double a : {1.0, 2.0, 4.0, 8.0}) {
      for (double width : {0.5, 1.0, 3.0}) {
        auto f = sample_radial(g, [width](double r) { return std::exp(-r * r / (2 * width * width)); },
                               Side::physical);
        const double ratio = sobolev_norm(apply_cutoff(f, {a, CutoffKind::below}), gamma) /
                             sobolev_norm(f, gamma);
        worst = std::max(worst, ratio);
      }
    }
    CAPTURE(gamma);
    CHECK(worst <= 2.0);
  }
}
