#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

enum class Side { physical, frequency };

const char* to_string(Side side);

/// Bessel-zero collocation grid for radial functions on R^d.
///
/// Nodes sit at scaled zeros j_1 < ... < j_N of J_nu, nu = d/2 - 1:
///   r_i = j_i R / S,   rho_i = j_i / R,   S = j_{N+1},
/// so the frequency cutoff is K = S / R. The transform kernel
///   T_ij = 2 J_nu(j_i j_k / S) / (S |J_{nu+1}(j_i)| |J_{nu+1}(j_k)|)
/// is symmetric and orthogonal to rounding level, which makes the discrete
/// transform its own inverse in the weighted variables.
///
/// Fourier convention: F(xi) = int f(x) e^{-i x.xi} dx, so that
///   int |f|^2 dx = (2 pi)^{-d} int |F|^2 dxi.
/// Both quadrature weight vectors include the sphere area omega_{d-1} and the
/// radial Jacobian; the frequency weights also carry the (2 pi)^{-d}.
///
/// Immutable after construction and shared between threads.
class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 16;
  static constexpr std::size_t kMaxNodes = 16384;

  RadialGrid(int dim, std::size_t node_count, double radius_max);

  int dim() const noexcept { return dim_; }
  double order() const noexcept { return order_; }
  std::size_t size() const noexcept { return r_.size(); }
  double radius_max() const noexcept { return radius_max_; }
  double freq_max() const noexcept { return freq_max_; }
  /// Surface area of the unit sphere S^{d-1}.
  double sphere_area() const noexcept { return sphere_area_; }

  std::span<const double> r_nodes() const noexcept { return r_; }
  std::span<const double> rho_nodes() const noexcept { return rho_; }
  std::span<const double> quad_weights_space() const noexcept { return qs_; }
  std::span<const double> quad_weights_freq() const noexcept { return qf_; }
  /// Row-major N x N kernel matrix.
  std::span<const double> kernel() const noexcept { return kernel_; }

  /// Physical-side samples to frequency-side samples (and back). `count`
  /// variants transform contiguous batches of vectors.
  void forward(std::span<const cplx> in, std::span<cplx> out,
               std::size_t count = 1) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out,
               std::size_t count = 1) const;
  /// Single-threaded reference path through the serial kernels.
  void forward_serial(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse_serial(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  void apply(std::span<const cplx> in, std::span<cplx> out, std::size_t count,
             std::span<const double> pre, std::span<const double> post,
             bool serial) const;

  int dim_;
  double order_;
  double radius_max_;
  double freq_max_;
  double sphere_area_;
  std::vector<double> r_, rho_, qs_, qf_;
  // Diagonal scalings into and out of the orthogonal kernel.
  std::vector<double> space_in_, freq_out_, freq_in_, space_out_;
  std::vector<double> kernel_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Validates (d >= 2, node_count in [16, 16384], R > 0) and builds a grid.
GridPtr build_grid(int dim, std::size_t node_count, double radius_max);

/// Node count needed for frequency cutoff `freq_max` at radius `radius_max`
/// (K R ~ pi N), rounded up to a multiple of 64.
std::size_t nodes_for(double freq_max, double radius_max);

/// Complex samples of a radial function on one side of a grid.
class RadialField {
 public:
  RadialField(GridPtr grid, Side side);
  RadialField(GridPtr grid, Side side, std::vector<cplx> values);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  Side side() const noexcept { return side_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  /// Nodes of this field's side (r for physical, rho for frequency).
  std::span<const double> nodes() const noexcept;

  bool all_finite() const noexcept;

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(cplx scale) noexcept;

 private:
  void check_compatible(const RadialField& other) const;

  GridPtr grid_;
  Side side_;
  std::vector<cplx> values_;
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(cplx s, RadialField a);
RadialField conj(RadialField f);

/// Throws std::invalid_argument when the field holds NaN or Inf.
void require_finite(const RadialField& f, const char* who);
/// Throws std::invalid_argument unless f is on `side`.
void require_side(const RadialField& f, Side side, const char* who);

RadialField to_frequency(const RadialField& f);
RadialField to_space(const RadialField& f);
/// Returns f on the requested side, transforming if necessary.
RadialField on_side(const RadialField& f, Side side);

/// Pointwise evaluation of a radial profile at the nodes of `side`.
template <class Profile>
RadialField sample_radial(GridPtr grid, Profile&& profile, Side side) {
  RadialField out(grid, side);
  const auto nodes = out.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx v = cplx(profile(nodes[i]));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("sample_radial: profile is not finite at a node");
    }
    out[i] = v;
  }
  return out;
}

/// Frequency-side multiplication by m(rho); the result comes back on the
/// input side. `m` may return real or complex values.
template <class Multiplier>
RadialField apply_multiplier(const RadialField& f, Multiplier&& m) {
  RadialField g = on_side(f, Side::frequency);
  const auto rho = g.nodes();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= m(rho[i]);
  return on_side(g, f.side());
}

/// Fraction of the L^2 mass carried at radii above `radius`.
double mass_fraction_beyond(const RadialField& f, double radius);

}  // namespace nlslab
