#pragma once

#include <cstddef>
#include <vector>

namespace nlslab::bessel {

/// J_nu(x) for x >= 0. Integer and half-integer orders take closed-form or
/// rational-approximation paths; other orders use the general algorithm.
double j(double nu, double x);

/// x^{-nu} J_nu(x), continuous at x = 0 where it equals 1 / (2^nu Gamma(nu+1)).
double j_scaled(double nu, double x);

/// The first `count` positive zeros of J_nu, ascending.
std::vector<double> zeros(double nu, std::size_t count);

}  // namespace nlslab::bessel
