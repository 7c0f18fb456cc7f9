#include "nlslab/localization.hpp"

#include <cmath>
#include <stdexcept>

namespace nlslab {

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double cutoff_below(double x, double a) {
  return 1.0 - smooth_step((std::abs(x) - a) / (0.1 * a));
}

void CutoffSpec::validate() const {
  if (!(threshold > 0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("CutoffSpec: threshold must be positive");
  }
  if (kind == CutoffKind::band && !(upper > threshold)) {
    throw std::invalid_argument("CutoffSpec: band needs upper > threshold");
  }
}

double CutoffSpec::profile(double x) const {
  switch (kind) {
    case CutoffKind::below:
      return cutoff_below(x, threshold);
    case CutoffKind::above:
      return 1.0 - cutoff_below(x, threshold);
    case CutoffKind::annulus:
      return cutoff_below(x, 2.0 * threshold) - cutoff_below(x, threshold);
    case CutoffKind::band:
      return cutoff_below(x, upper) - cutoff_below(x, threshold);
  }
  return 0.0;
}

void BandSpec::validate() const {
  if (!(cutoff_freq > 0) || !std::isfinite(cutoff_freq)) {
    throw std::invalid_argument("BandSpec: cutoff frequency must be positive");
  }
}

double BandSpec::multiplier(double rho) const {
  switch (kind) {
    case BandKind::low:
      return cutoff_below(rho, cutoff_freq);
    case BandKind::high:
      return 1.0 - cutoff_below(rho, cutoff_freq);
    case BandKind::band:
      return cutoff_below(rho, 2.0 * cutoff_freq) - cutoff_below(rho, cutoff_freq);
  }
  return 0.0;
}

RadialField apply_cutoff(const RadialField& f, const CutoffSpec& spec) {
  require_side(f, Side::physical, "apply_cutoff");
  spec.validate();
  RadialField out = f;
  const auto r = f.grid().r_nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= spec.profile(r[i]);
  return out;
}

double apply_time_cutoff(double t, double threshold) {
  if (!(threshold > 0)) {
    throw std::invalid_argument("apply_time_cutoff: threshold must be positive");
  }
  return cutoff_below(t, threshold);
}

RadialField project(const RadialField& f, const BandSpec& spec) {
  spec.validate();
  require_finite(f, "project");
  return apply_multiplier(f, [&](double rho) { return spec.multiplier(rho); });
}

double frequency_mass_fraction(const RadialField& f, double lo, double hi) {
  const RadialField g = on_side(f, Side::frequency);
  const auto rho = g.nodes();
  const auto q = g.grid().quad_weights_freq();
  double total = 0.0;
  double inside = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double m = q[i] * std::norm(g[i]);
    total += m;
    if (rho[i] >= lo && rho[i] <= hi) inside += m;
  }
  return total > 0.0 ? inside / total : 1.0;
}

}  // namespace nlslab
