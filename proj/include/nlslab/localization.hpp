#pragma once

#include "nlslab/radial_grid.hpp"

namespace nlslab {

/// psi(s) = e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}), clamped to 0 for s <= 0 and
/// 1 for s >= 1. Smooth and monotone on [0, 1].
double smooth_step(double s);

/// chi_{<=a}(x): 1 for |x| <= a, 0 for |x| >= 1.1 a, smooth in between.
double cutoff_below(double x, double a);

enum class CutoffKind { below, above, annulus, band };

/// Spatial cutoff chi. `annulus` is chi_{<=2a} - chi_{<=a}; `band` is
/// chi_{<=b} - chi_{<=a} with b = upper > a.
struct CutoffSpec {
  double threshold = 1.0;
  CutoffKind kind = CutoffKind::below;
  double upper = 0.0;

  void validate() const;
  double profile(double x) const;
};

enum class BandKind { low, high, band };

/// Littlewood-Paley multiplier: low is chi_{<=N}(rho), high is 1 - chi_{<=N},
/// band (P_N) is chi_{<=2N} - chi_{<=N}, supported in [N, 2.2 N].
struct BandSpec {
  double cutoff_freq = 1.0;
  BandKind kind = BandKind::band;

  void validate() const;
  double multiplier(double rho) const;
};

/// Pointwise multiplication by the spatial profile at the r-nodes.
RadialField apply_cutoff(const RadialField& f, const CutoffSpec& spec);

/// The spatial profile chi_{<=threshold} evaluated at |t|.
double apply_time_cutoff(double t, double threshold);

/// Frequency multiplier; result returned on the input side.
RadialField project(const RadialField& f, const BandSpec& spec);

/// Fraction of the frequency-side L^2 mass inside [lo, hi].
double frequency_mass_fraction(const RadialField& f, double lo, double hi);

}  // namespace nlslab
