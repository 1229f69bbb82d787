#pragma once

// Scan kernels shared by the serial reference and the OpenMP paths. All
// variants perform the same operations in the same order per vector, so any
// two of them agree bit for bit on the same input.

#include <cstddef>
#include <vector>

#include "fgc/fast_multiply.hpp"

namespace fgc::kernels {

struct PlainArith {
  static double mul(double a, double b) noexcept { return a * b; }
  static double add(double a, double b) noexcept { return a + b; }
};

struct CountingArith {
  OperationCount* count;
  double mul(double a, double b) const noexcept {
    ++count->multiplications;
    return a * b;
  }
  double add(double a, double b) const noexcept {
    ++count->additions;
    return a + b;
  }
};

/// Advances the accumulators acc[0..k] past one input value.
/// Updating r from high to low lets the update happen in place.
template <class Arith>
inline void advance(double xi, int k, const BinomialTable& binom, double* acc, Arith& ar) {
  for (int r = k + 1; r >= 1; --r) {
    double t = ar.add(xi, acc[0]);
    for (int s = 2; s <= r; ++s) t = ar.add(t, ar.mul(binom(r, s), acc[s - 1]));
    acc[r - 1] = t;
  }
}

/// y[i*ys] = sum_{j<i} (i-j)^k x[j*xs]. Negative strides scan backwards.
template <class Arith>
void lower_scan(const double* x, std::ptrdiff_t xs, double* y, std::ptrdiff_t ys, std::size_t n,
                int k, const BinomialTable& binom, double* acc, Arith& ar) {
  for (int r = 0; r <= k; ++r) acc[r] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[static_cast<std::ptrdiff_t>(i) * ys] = acc[k];
    if (i + 1 == n) break;
    advance(x[static_cast<std::ptrdiff_t>(i) * xs], k, binom, acc, ar);
  }
}

/// y = scale * (L + L^T) x at power k >= 1, or scale * J x at k == 0.
/// x and y must not alias.
void distance_scan(const double* x, std::ptrdiff_t xs, double* y, std::ptrdiff_t ys,
                   std::size_t n, int k, double scale, const BinomialTable& binom, double* acc);

/// Applies distance_scan down columns [c0, c1) of a row-major rows x ld
/// matrix, carrying the accumulators of all those columns together.
void distance_scan_columns(const double* x, double* y, std::size_t rows, std::size_t ld,
                           std::size_t c0, std::size_t c1, int k, double scale,
                           const BinomialTable& binom, std::vector<double>& acc);

struct Workspace2D {
  std::vector<double> x, left, right, sum, acc;
  void reserve(std::size_t n, int power);
};

/// scale * D_hat^(power) x for a side x side grid, x and y strided.
void distance_2d(const double* x, std::ptrdiff_t xs, double* y, std::ptrdiff_t ys,
                 std::size_t side, int power, double scale, const BinomialTable& binom,
                 Workspace2D& ws);

/// base^p by repeated multiplication; shared by the fast and dense paths so
/// both use identical scale factors.
inline double int_pow(double base, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

}  // namespace fgc::kernels
