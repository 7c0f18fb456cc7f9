#include "nlslab/radial_grid.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "nlslab/bessel.hpp"
#include "nlslab/kernels.hpp"

namespace nlslab {

const char* to_string(Side side) {
  return side == Side::physical ? "physical" : "frequency";
}

RadialGrid::RadialGrid(int dim, std::size_t node_count, double radius_max)
    : dim_(dim), order_(0.5 * dim - 1.0), radius_max_(radius_max) {
  if (dim < 2) throw std::invalid_argument("build_grid: dimension must be >= 2");
  if (node_count < kMinNodes) {
    throw std::invalid_argument("build_grid: node_count below minimum of " +
                                std::to_string(kMinNodes));
  }
  if (node_count > kMaxNodes) {
    throw std::invalid_argument("build_grid: node_count above maximum of " +
                                std::to_string(kMaxNodes));
  }
  if (!(radius_max > 0) || !std::isfinite(radius_max)) {
    throw std::invalid_argument("build_grid: radius_max must be positive");
  }

  const std::size_t n = node_count;
  const double nu = order_;
  const auto zeros = bessel::zeros(nu, n + 1);
  const double s = zeros[n];
  freq_max_ = s / radius_max;
  sphere_area_ = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) /
                 boost::math::tgamma(0.5 * dim);
  const double two_pi_d = std::pow(2.0 * std::numbers::pi, dim);
  const double ft_const = std::pow(2.0 * std::numbers::pi, 0.5 * dim);

  std::vector<double> jnext(n);  // |J_{nu+1}(j_i)|
  r_.resize(n);
  rho_.resize(n);
  qs_.resize(n);
  qf_.resize(n);
  space_in_.resize(n);
  freq_out_.resize(n);
  freq_in_.resize(n);
  space_out_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = zeros[i];
    jnext[i] = std::abs(bessel::j(nu + 1.0, z));
    r_[i] = z * radius_max / s;
    rho_[i] = z / radius_max;
    // Radial quadrature weights for int h(r) r dr and int H(rho) rho drho.
    const double w = 2.0 * radius_max * radius_max / (s * s * jnext[i] * jnext[i]);
    const double v = 2.0 * freq_max_ * freq_max_ / (s * s * jnext[i] * jnext[i]);
    qs_[i] = sphere_area_ * w * std::pow(r_[i], dim - 2);
    qf_[i] = sphere_area_ * v * std::pow(rho_[i], dim - 2) / two_pi_d;
    const double rn = std::pow(r_[i], nu);
    const double pn = std::pow(rho_[i], nu);
    space_in_[i] = std::sqrt(w) * rn;
    freq_out_[i] = ft_const / (pn * std::sqrt(v));
    freq_in_[i] = std::sqrt(v) * pn / ft_const;
    space_out_[i] = 1.0 / (rn * std::sqrt(w));
  }

  kernel_.resize(n * n);
  kernels::fill_symmetric(std::span<double>(kernel_), n,
                          [&](std::size_t i, std::size_t k) {
                            return 2.0 * bessel::j(nu, zeros[i] * zeros[k] / s) /
                                   (s * jnext[i] * jnext[k]);
                          });
}

void RadialGrid::apply(std::span<const cplx> in, std::span<cplx> out,
                       std::size_t count, std::span<const double> pre,
                       std::span<const double> post, bool serial) const {
  const std::size_t n = size();
  if (in.size() != n * count || out.size() != n * count) {
    throw std::invalid_argument("RadialGrid: transform size mismatch");
  }
  std::vector<cplx> scaled(n * count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) scaled[k * n + i] = pre[i] * in[k * n + i];
  }
  if (serial) {
    if (count == 1) {
      kernels::matvec_serial(kernel_, n, scaled, out);
    } else {
      kernels::matmul_serial(kernel_, n, scaled, out, count);
    }
  } else if (count == 1) {
    kernels::matvec(kernel_, n, scaled, out);
  } else {
    kernels::matmul(kernel_, n, scaled, out, count);
  }
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n; ++i) out[k * n + i] *= post[i];
  }
}

void RadialGrid::forward(std::span<const cplx> in, std::span<cplx> out,
                         std::size_t count) const {
  apply(in, out, count, space_in_, freq_out_, false);
}

void RadialGrid::inverse(std::span<const cplx> in, std::span<cplx> out,
                         std::size_t count) const {
  apply(in, out, count, freq_in_, space_out_, false);
}

void RadialGrid::forward_serial(std::span<const cplx> in,
                                std::span<cplx> out) const {
  apply(in, out, 1, space_in_, freq_out_, true);
}

void RadialGrid::inverse_serial(std::span<const cplx> in,
                                std::span<cplx> out) const {
  apply(in, out, 1, freq_in_, space_out_, true);
}

GridPtr build_grid(int dim, std::size_t node_count, double radius_max) {
  return std::make_shared<const RadialGrid>(dim, node_count, radius_max);
}

std::size_t nodes_for(double freq_max, double radius_max) {
  if (!(freq_max > 0) || !(radius_max > 0)) {
    throw std::invalid_argument("nodes_for: cutoffs must be positive");
  }
  const double raw = freq_max * radius_max / std::numbers::pi;
  const auto blocks = static_cast<std::size_t>(std::ceil(raw / 64.0));
  return std::max<std::size_t>(blocks, 1) * 64;
}

// ---------------------------------------------------------------------------

RadialField::RadialField(GridPtr grid, Side side)
    : grid_(std::move(grid)), side_(side) {
  if (!grid_) throw std::invalid_argument("RadialField: null grid");
  values_.assign(grid_->size(), cplx(0.0, 0.0));
}

RadialField::RadialField(GridPtr grid, Side side, std::vector<cplx> values)
    : grid_(std::move(grid)), side_(side), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("RadialField: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("RadialField: length " +
                                std::to_string(values_.size()) +
                                " does not match grid size " +
                                std::to_string(grid_->size()));
  }
}

std::span<const double> RadialField::nodes() const noexcept {
  return side_ == Side::physical ? grid_->r_nodes() : grid_->rho_nodes();
}

bool RadialField::all_finite() const noexcept {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void RadialField::check_compatible(const RadialField& other) const {
  if (grid_ != other.grid_) {
    throw std::invalid_argument("RadialField: operands live on different grids");
  }
  if (side_ != other.side_) {
    throw std::invalid_argument("RadialField: operands live on different sides");
  }
}

RadialField& RadialField::operator+=(const RadialField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(cplx scale) noexcept {
  for (auto& v : values_) v *= scale;
  return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(cplx s, RadialField a) { return a *= s; }

RadialField conj(RadialField f) {
  for (auto& v : f.values()) v = std::conj(v);
  return f;
}

void require_finite(const RadialField& f, const char* who) {
  if (!f.all_finite()) {
    throw std::invalid_argument(std::string(who) + ": field has non-finite values");
  }
}

void require_side(const RadialField& f, Side side, const char* who) {
  if (f.side() != side) {
    throw std::invalid_argument(std::string(who) + ": expected " +
                                to_string(side) + "-side field, got " +
                                to_string(f.side()));
  }
}

RadialField to_frequency(const RadialField& f) {
  require_side(f, Side::physical, "to_frequency");
  require_finite(f, "to_frequency");
  RadialField out(f.grid_ptr(), Side::frequency);
  f.grid().forward(f.values(), out.values());
  return out;
}

RadialField to_space(const RadialField& f) {
  require_side(f, Side::frequency, "to_space");
  require_finite(f, "to_space");
  RadialField out(f.grid_ptr(), Side::physical);
  f.grid().inverse(f.values(), out.values());
  return out;
}

RadialField on_side(const RadialField& f, Side side) {
  if (f.side() == side) return f;
  return side == Side::frequency ? to_frequency(f) : to_space(f);
}

double mass_fraction_beyond(const RadialField& f, double radius) {
  const RadialField u = on_side(f, Side::physical);
  const auto r = u.grid().r_nodes();
  const auto q = u.grid().quad_weights_space();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = q[i] * std::norm(u[i]);
    total += m;
    if (r[i] > radius) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace nlslab
