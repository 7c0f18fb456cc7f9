#include "nlslab/bessel.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <iterator>
#include <numbers>
#include <stdexcept>

namespace nlslab::bessel {
namespace {

// Double precision throughout; the default policy promotes to long double,
// which costs several times more per call with no accuracy benefit here.
using Policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>>;

bool is_integer(double nu) { return std::floor(nu) == nu; }
bool is_half_integer(double nu) { return is_integer(nu - 0.5); }

}  // namespace

double j(double nu, double x) {
  if (is_integer(nu)) {
    return boost::math::cyl_bessel_j(static_cast<int>(nu), x, Policy());
  }
  if (is_half_integer(nu) && nu > 0) {
    // J_{n+1/2}(x) = sqrt(2x/pi) j_n(x)
    if (x == 0.0) return 0.0;
    const auto n = static_cast<unsigned>(nu - 0.5);
    return std::sqrt(2.0 * x / std::numbers::pi) *
           boost::math::sph_bessel(n, x, Policy());
  }
  return boost::math::cyl_bessel_j(nu, x, Policy());
}

double j_scaled(double nu, double x) {
  if (x < 1e-6) {
    // Two-term series; the next term is O(x^4).
    const double lead = 1.0 / (std::pow(2.0, nu) * boost::math::tgamma(nu + 1, Policy()));
    return lead * (1.0 - x * x / (4.0 * (nu + 1.0)));
  }
  return j(nu, x) * std::pow(x, -nu);
}

std::vector<double> zeros(double nu, std::size_t count) {
  if (nu < 0) throw std::invalid_argument("bessel::zeros: negative order");
  std::vector<double> out;
  out.reserve(count);
  if (count == 0) return out;
  if (nu == 0.5) {
    // J_{1/2}(x) is proportional to sin(x)/sqrt(x)
    for (std::size_t k = 1; k <= count; ++k) {
      out.push_back(static_cast<double>(k) * std::numbers::pi);
    }
    return out;
  }
  boost::math::cyl_bessel_j_zero(nu, 1, static_cast<unsigned>(count),
                                 std::back_inserter(out), Policy());
  return out;
}

}  // namespace nlslab::bessel
