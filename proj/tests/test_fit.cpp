#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nlslab/fit.hpp"

using namespace nlslab;

TEST_CASE("power-law fit recovers exact laws") {
  std::vector<double> t{1, 2, 4, 8, 16}, v;
  for (double x : t) v.push_back(3.0 * std::pow(x, -2.0));
  auto pl = fit_power_law(t, v);
  CHECK(std::abs(pl.slope + 2.0) <= 1e-10);
  CHECK(std::exp(pl.intercept) == doctest::Approx(3.0));
  CHECK(pl.r_squared == doctest::Approx(1.0));
  std::vector<double> c(5, 7.0);
  auto flat = fit_power_law(t, c);
  CHECK(std::abs(flat.slope) <= 1e-14);
  CHECK(flat.r_squared == 1.0);
}

TEST_CASE("power-law fit preconditions") {
  std::vector<double> two{1, 2, 1, 2}, v{1, 2, 3, 4};
  CHECK_THROWS_AS(fit_power_law(two, v), std::invalid_argument);
  std::vector<double> t{1, 2, 3}, w{1, 1, 1};
  CHECK_THROWS_AS(fit_power_law(t, w), std::invalid_argument);
  std::vector<double> t4{1, 2, 3, 4}, neg{1, -1, 1, 1};
  CHECK_THROWS_AS(fit_power_law(t4, neg), std::invalid_argument);
}

TEST_CASE("verdict rule") {
  std::vector<double> t{1, 2, 4, 8}, v;
  for (double x : t) v.push_back(std::pow(x, -0.9));
  CHECK(make_fit("a", "ref", t, v, -1.0, 0.1).pass);
  CHECK_FALSE(make_fit("a", "ref", t, v, -1.0, 0.05).pass);
  CHECK(make_fit("a", "ref", t, v, -1.0, 0.2, Comparison::at_most).pass);
  CHECK_FALSE(make_fit("a", "ref", t, v, -1.5, 0.3, Comparison::at_most).pass);
  // Noisy samples fail on R^2 even when the slope matches.
  std::vector<double> noisy{1.0, 0.2, 1.0, 0.2};
  auto f = make_fit("n", "ref", t, noisy, -0.5, 1.0);
  CHECK(f.r_squared < 0.95);
  CHECK_FALSE(f.pass);
}

TEST_CASE("two-term fits") {
  std::vector<double> t{0, 1, 2, 3, 4}, y;
  for (double x : t) y.push_back(2 + 0.5 * x);
  auto lin = fit_two_term(t, y, 1.0);
  CHECK(lin.c0 == doctest::Approx(2.0));
  CHECK(lin.c1 == doctest::Approx(0.5));
  CHECK(lin.rss <= 1e-20);
  CHECK(fit_two_term(t, y, 1.5).rss > lin.rss);
  CHECK(linear_slope(t, y) == doctest::Approx(0.5));
}
