#pragma once

#include <span>
#include <string>
#include <vector>

namespace nlslab {

struct PowerLaw {
  double slope = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double r_squared = 0.0;
};

/// Least squares of log(value) on log(abscissa). Needs >= 4 samples, all
/// positive, with at least 3 distinct abscissae.
PowerLaw fit_power_law(std::span<const double> abscissa, std::span<const double> value);

/// How a fitted slope is judged against theory.
enum class Comparison {
  within,   ///< |slope - theory| <= tolerance
  at_most,  ///< slope <= theory + tolerance
  at_least, ///< slope >= theory - tolerance
};

const char* to_string(Comparison c);

struct DecayFit {
  std::string name;
  /// The estimate being tested, in words and formula.
  std::string reference;
  std::vector<double> abscissa;
  std::vector<double> value;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double theory_slope = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::within;
  double min_r_squared = 0.95;
  bool pass = false;
};

/// Fits and assigns the verdict: slope criterion and R^2 >= min_r_squared.
DecayFit make_fit(std::string name, std::string reference,
                  std::vector<double> abscissa, std::vector<double> value,
                  double theory_slope, double tolerance,
                  Comparison comparison = Comparison::within,
                  double min_r_squared = 0.95);

/// y = c0 + c1 * t^exponent by least squares.
struct TwoTermFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double exponent = 1.0;
  double rss = 0.0;
  double r_squared = 0.0;
};

TwoTermFit fit_two_term(std::span<const double> t, std::span<const double> y,
                        double exponent);

/// Least-squares slope of y against x (no logs).
double linear_slope(std::span<const double> x, std::span<const double> y);

}  // namespace nlslab
