#include "nlslab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nlslab {
namespace {

struct Line {
  double slope, intercept, r2, rss;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("fit: degenerate abscissae");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (intercept + slope * x[i]);
    rss += e * e;
  }
  // A constant response is fitted exactly by a flat line.
  const double flat = 1e-24 * n * (1.0 + my * my);
  const double r2 = syy > flat ? std::clamp(1.0 - rss / syy, 0.0, 1.0) : 1.0;
  return {slope, intercept, r2, rss};
}

}  // namespace

PowerLaw fit_power_law(std::span<const double> abscissa, std::span<const double> value) {
  if (abscissa.size() != value.size()) {
    throw std::invalid_argument("fit_power_law: sample arrays differ in length");
  }
  if (abscissa.size() < 4) throw std::invalid_argument("fit_power_law: need >= 4 samples");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    if (!(abscissa[i] > 0) || !(value[i] > 0) || !std::isfinite(abscissa[i]) ||
        !std::isfinite(value[i])) {
      throw std::invalid_argument("fit_power_law: samples must be positive and finite");
    }
    lx.push_back(std::log(abscissa[i]));
    ly.push_back(std::log(value[i]));
  }
  if (std::set<double>(abscissa.begin(), abscissa.end()).size() < 3) {
    throw std::invalid_argument("fit_power_law: insufficient spread in abscissae");
  }
  const Line l = least_squares(lx, ly);
  return {l.slope, l.intercept, l.r2};
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::within: return "within";
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
  }
  return "within";
}

DecayFit make_fit(std::string name, std::string reference,
                  std::vector<double> abscissa, std::vector<double> value,
                  double theory_slope, double tolerance, Comparison comparison,
                  double min_r_squared) {
  const PowerLaw pl = fit_power_law(abscissa, value);
  DecayFit f;
  f.name = std::move(name);
  f.reference = std::move(reference);
  f.abscissa = std::move(abscissa);
  f.value = std::move(value);
  f.fitted_slope = pl.slope;
  f.intercept = pl.intercept;
  f.r_squared = pl.r_squared;
  f.theory_slope = theory_slope;
  f.tolerance = tolerance;
  f.comparison = comparison;
  f.min_r_squared = min_r_squared;
  bool slope_ok = false;
  switch (comparison) {
    case Comparison::within:
      slope_ok = std::abs(pl.slope - theory_slope) <= tolerance;
      break;
    case Comparison::at_most:
      slope_ok = pl.slope <= theory_slope + tolerance;
      break;
    case Comparison::at_least:
      slope_ok = pl.slope >= theory_slope - tolerance;
      break;
  }
  f.pass = slope_ok && pl.r_squared >= min_r_squared;
  return f;
}

TwoTermFit fit_two_term(std::span<const double> t, std::span<const double> y,
                        double exponent) {
  if (t.size() != y.size() || t.size() < 3) {
    throw std::invalid_argument("fit_two_term: need >= 3 paired samples");
  }
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::pow(t[i], exponent);
  const Line l = least_squares(x, y);
  return {l.intercept, l.slope, exponent, l.rss, l.r2};
}

double linear_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_slope: need >= 2 paired samples");
  }
  return least_squares(x, y).slope;
}

}  // namespace nlslab
