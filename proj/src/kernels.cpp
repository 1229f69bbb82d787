#include "kernels.hpp"

#include <algorithm>

namespace fgc::kernels {

void distance_scan(const double* x, std::ptrdiff_t xs, double* y, std::ptrdiff_t ys,
                   std::size_t n, int k, double scale, const BinomialTable& binom, double* acc) {
  if (n == 0) return;
  if (k == 0) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += x[static_cast<std::ptrdiff_t>(i) * xs];
    for (std::size_t i = 0; i < n; ++i) y[static_cast<std::ptrdiff_t>(i) * ys] = scale * total;
    return;
  }
  PlainArith ar;
  lower_scan(x, xs, y, ys, n, k, binom, acc, ar);

  // Backward scan for the upper triangle, folded into y.
  for (int r = 0; r <= k; ++r) acc[r] = 0.0;
  for (std::size_t m = n; m-- > 0;) {
    double& yi = y[static_cast<std::ptrdiff_t>(m) * ys];
    yi = scale * (yi + acc[k]);
    if (m == 0) break;
    advance(x[static_cast<std::ptrdiff_t>(m) * xs], k, binom, acc, ar);
  }
}

void distance_scan_columns(const double* x, double* y, std::size_t rows, std::size_t ld,
                           std::size_t c0, std::size_t c1, int k, double scale,
                           const BinomialTable& binom, std::vector<double>& acc) {
  const std::size_t w = c1 - c0;
  if (rows == 0 || w == 0) return;
  if (k == 0) {
    acc.assign(w, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 0; c < w; ++c) acc[c] += x[i * ld + c0 + c];
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 0; c < w; ++c) y[i * ld + c0 + c] = scale * acc[c];
    return;
  }

  const auto order = static_cast<std::size_t>(k) + 1;
  acc.assign(order * w, 0.0);
  double* a = acc.data();
  const double* top = a + static_cast<std::size_t>(k) * w;

  // Same per-column arithmetic as advance(), vectorized across columns.
  auto step = [&](const double* xrow) {
    for (int r = k + 1; r >= 1; --r) {
      double* dst = a + static_cast<std::size_t>(r - 1) * w;
      for (std::size_t c = 0; c < w; ++c) {
        double t = xrow[c] + a[c];
        for (int s = 2; s <= r; ++s) t = t + binom(r, s) * a[static_cast<std::size_t>(s - 1) * w + c];
        dst[c] = t;
      }
    }
  };

  for (std::size_t i = 0; i < rows; ++i) {
    double* yrow = y + i * ld + c0;
    std::copy(top, top + w, yrow);
    if (i + 1 == rows) break;
    step(x + i * ld + c0);
  }

  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t m = rows; m-- > 0;) {
    double* yrow = y + m * ld + c0;
    for (std::size_t c = 0; c < w; ++c) yrow[c] = scale * (yrow[c] + top[c]);
    if (m == 0) break;
    step(x + m * ld + c0);
  }
}

void Workspace2D::reserve(std::size_t n, int power) {
  const std::size_t nn = n * n;
  x.resize(nn);
  left.resize(nn);
  right.resize(nn);
  sum.resize(nn);
  acc.reserve((static_cast<std::size_t>(power) + 1) * n);
}

void distance_2d(const double* x, std::ptrdiff_t xs, double* y, std::ptrdiff_t ys,
                 std::size_t side, int power, double scale, const BinomialTable& binom,
                 Workspace2D& ws) {
  const std::size_t n = side;
  const std::size_t nn = n * n;
  ws.reserve(n, power);
  for (std::size_t i = 0; i < nn; ++i) ws.x[i] = x[static_cast<std::ptrdiff_t>(i) * xs];
  std::fill(ws.sum.begin(), ws.sum.end(), 0.0);

  std::vector<double> col_acc(static_cast<std::size_t>(power) + 1);
  for (int r = 0; r <= power; ++r) {
    const int left_power = power - r;
    // Columns of mat(x) are contiguous in column-major storage.
    for (std::size_t j = 0; j < n; ++j)
      distance_scan(ws.x.data() + j * n, 1, ws.left.data() + j * n, 1, n, left_power, 1.0, binom,
                    col_acc.data());
    // Rows of mat(left) are the columns of its row-major reinterpretation.
    distance_scan_columns(ws.left.data(), ws.right.data(), n, n, 0, n, r, 1.0, binom, ws.acc);
    const double c = binom.choose(power, r);
    for (std::size_t i = 0; i < nn; ++i) ws.sum[i] += c * ws.right[i];
  }
  for (std::size_t i = 0; i < nn; ++i) y[static_cast<std::ptrdiff_t>(i) * ys] = scale * ws.sum[i];
}

}  // namespace fgc::kernels
