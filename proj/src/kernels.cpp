#include "nlslab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace nlslab::kernels {
namespace {

void check_shapes(std::span<const double> a, std::size_t n, std::size_t xs,
                  std::size_t ys, std::size_t count) {
  if (a.size() != n * n || xs != n * count || ys != n * count) {
    throw std::invalid_argument("kernels: operand sizes do not match n");
  }
}

// Row i of A against the split real/imaginary input. The reduction order is
// fixed by the compiler's vector width and depends only on n, never on
// threading, so parallel and serial callers produce identical bits.
inline void row_dot(const double* row, const double* re, const double* im,
                    std::size_t n, double& out_re, double& out_im) {
  double sr = 0.0;
  double si = 0.0;
#pragma omp simd reduction(+ : sr, si)
  for (std::size_t j = 0; j < n; ++j) {
    sr += row[j] * re[j];
    si += row[j] * im[j];
  }
  out_re = sr;
  out_im = si;
}

void split(std::span<const cplx> x, std::vector<double>& re,
           std::vector<double>& im) {
  re.resize(x.size());
  im.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    re[j] = x[j].real();
    im[j] = x[j].imag();
  }
}

// Column block width for matmul, in real columns (re/im of 4 vectors).
constexpr std::size_t kBlock = 8;

// Packs vectors [k0, k0+nk) as an n x kBlock row-major real panel.
void pack_panel(std::span<const cplx> x, std::size_t n, std::size_t k0,
                std::size_t nk, std::vector<double>& panel) {
  panel.assign(n * kBlock, 0.0);
  for (std::size_t k = 0; k < nk; ++k) {
    const cplx* v = x.data() + (k0 + k) * n;
    for (std::size_t j = 0; j < n; ++j) {
      panel[j * kBlock + 2 * k] = v[j].real();
      panel[j * kBlock + 2 * k + 1] = v[j].imag();
    }
  }
}

inline void row_panel(const double* row, const double* panel, std::size_t n,
                      double* acc) {
  double s[kBlock] = {};
  for (std::size_t j = 0; j < n; ++j) {
    const double a = row[j];
    const double* p = panel + j * kBlock;
#pragma omp simd
    for (std::size_t c = 0; c < kBlock; ++c) s[c] += a * p[c];
  }
  for (std::size_t c = 0; c < kBlock; ++c) acc[c] = s[c];
}

void unpack_row(const double* acc, std::span<cplx> y, std::size_t n,
                std::size_t i, std::size_t k0, std::size_t nk) {
  for (std::size_t k = 0; k < nk; ++k) {
    y[(k0 + k) * n + i] = cplx(acc[2 * k], acc[2 * k + 1]);
  }
}

}  // namespace

void matvec(std::span<const double> a, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y) {
  check_shapes(a, n, x.size(), y.size(), 1);
  std::vector<double> re, im;
  split(x, re, im);
  const double* base = a.data();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double yr, yi;
    row_dot(base + i * n, re.data(), im.data(), n, yr, yi);
    y[i] = cplx(yr, yi);
  }
}

void matvec_serial(std::span<const double> a, std::size_t n,
                   std::span<const cplx> x, std::span<cplx> y) {
  check_shapes(a, n, x.size(), y.size(), 1);
  std::vector<double> re, im;
  split(x, re, im);
  for (std::size_t i = 0; i < n; ++i) {
    double yr, yi;
    row_dot(a.data() + i * n, re.data(), im.data(), n, yr, yi);
    y[i] = cplx(yr, yi);
  }
}

void matmul(std::span<const double> a, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y, std::size_t count) {
  check_shapes(a, n, x.size(), y.size(), count);
  std::vector<double> panel;
  for (std::size_t k0 = 0; k0 < count; k0 += kBlock / 2) {
    const std::size_t nk = std::min(kBlock / 2, count - k0);
    pack_panel(x, n, k0, nk, panel);
    const double* p = panel.data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      double acc[kBlock];
      row_panel(a.data() + i * n, p, n, acc);
      unpack_row(acc, y, n, i, k0, nk);
    }
  }
}

void matmul_serial(std::span<const double> a, std::size_t n,
                   std::span<const cplx> x, std::span<cplx> y,
                   std::size_t count) {
  check_shapes(a, n, x.size(), y.size(), count);
  std::vector<double> panel;
  for (std::size_t k0 = 0; k0 < count; k0 += kBlock / 2) {
    const std::size_t nk = std::min(kBlock / 2, count - k0);
    pack_panel(x, n, k0, nk, panel);
    for (std::size_t i = 0; i < n; ++i) {
      double acc[kBlock];
      row_panel(a.data() + i * n, panel.data(), n, acc);
      unpack_row(acc, y, n, i, k0, nk);
    }
  }
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace nlslab::kernels
