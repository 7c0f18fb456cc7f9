#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Dense kernels behind the radial transform. Every parallel kernel has a
// serial twin with identical arithmetic order per output element, so tests
// can compare them bit-for-bit and the benchmark can time them side by side.
namespace nlslab::kernels {

using cplx = std::complex<double>;

/// y = A x, A a dense row-major n x n real matrix, x and y complex.
void matvec(std::span<const double> a, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y);
void matvec_serial(std::span<const double> a, std::size_t n,
                   std::span<const cplx> x, std::span<cplx> y);

/// Y = A X for `count` complex vectors stored contiguously (vector k occupies
/// x[k*n, (k+1)*n)). Reads A once per block of vectors instead of once per
/// vector.
void matmul(std::span<const double> a, std::size_t n, std::span<const cplx> x,
            std::span<cplx> y, std::size_t count);
void matmul_serial(std::span<const double> a, std::size_t n,
                   std::span<const cplx> x, std::span<cplx> y,
                   std::size_t count);

/// Fills the symmetric matrix a(i, j) = entry(i, j) from the upper triangle.
template <class Entry>
void fill_symmetric(std::span<double> a, std::size_t n, Entry&& entry) {
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      a[i * n + j] = entry(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) a[i * n + j] = a[j * n + i];
  }
}

template <class Entry>
void fill_symmetric_serial(std::span<double> a, std::size_t n, Entry&& entry) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      a[i * n + j] = entry(i, j);
      a[j * n + i] = a[i * n + j];
    }
  }
}

int max_threads();

}  // namespace nlslab::kernels
