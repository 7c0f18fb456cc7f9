#pragma once

#include <span>
#include <vector>

#include "nlslab/radial_grid.hpp"

namespace nlslab {

/// S(t) f = e^{it Delta} f, i.e. multiplication by e^{-it rho^2} on the
/// frequency side. Output on the input side.
RadialField evolve_free(const RadialField& f, double t);

/// S(t) f at every entry of `times`, as physical-side fields. Transforms the
/// data once and inverts the whole batch in one pass.
std::vector<RadialField> evolve_free_many(const RadialField& f,
                                          std::span<const double> times);

/// S(t) f by direct quadrature of the Schrodinger kernel
///   (4 pi i t)^{-d/2} int e^{i|x-y|^2/(4t)} f(y) dy,
/// reduced to a radial integral against s^{-nu} J_nu(r s / 2t). Independent
/// of the transform path; used as its oracle.
RadialField kernel_evolve_oracle(const RadialField& f, double t);

}  // namespace nlslab
