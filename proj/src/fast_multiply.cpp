#include "fgc/fast_multiply.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <string>

#include "fgc/error.hpp"
#include "fgc/log.hpp"
#include "kernels.hpp"

namespace fgc {
namespace {

std::atomic<bool> g_binomial_fault{false};

constexpr std::size_t kColumnBlock = 64;

void check_magnitude(const Grid& grid, int power) {
  const double bound = magnitude_bound(grid, power);
  if (bound > kMagnitudeWarning) {
    std::ostringstream os;
    os << "distance entries reach " << bound
       << "; partial power sums may lose relative precision";
    log::warn(os.str());
  }
}

struct Operator {
  const Grid* grid;
  int power;
  double scale;
};

Operator make_operator(const Grid& grid, std::optional<int> power) {
  const int p = power.value_or(grid_power(grid));
  if (p < 1) throw Error(ErrorCode::ConfigInvalid, "distance power must be >= 1");
  check_magnitude(grid, p);
  return Operator{&grid, p, kernels::int_pow(grid_spacing(grid), p)};
}

/// Per-thread scratch for applying one grid operator to strided vectors.
struct Scratch {
  explicit Scratch(const Operator& op)
      : binom(op.power + 2), acc(static_cast<std::size_t>(op.power) + 1) {}
  BinomialTable binom;
  std::vector<double> acc;
  kernels::Workspace2D ws2;
};

void apply_strided(const Operator& op, const double* x, std::ptrdiff_t xs, double* y,
                   std::ptrdiff_t ys, Scratch& sc) {
  if (const auto* g1 = std::get_if<UniformGrid1D>(op.grid)) {
    kernels::distance_scan(x, xs, y, ys, g1->size, op.power, op.scale, sc.binom, sc.acc.data());
  } else {
    const auto& g2 = std::get<UniformGrid2D>(*op.grid);
    kernels::distance_2d(x, xs, y, ys, g2.side, op.power, op.scale, sc.binom, sc.ws2);
  }
}

void check_plan_dims(const Matrix& plan, const Grid& gx, const Grid& gy) {
  if (plan.rows() != point_count(gx) || plan.cols() != point_count(gy)) {
    std::ostringstream os;
    os << "plan is " << plan.rows() << "x" << plan.cols() << " but grids have "
       << point_count(gx) << " and " << point_count(gy) << " points";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

void check_length(std::size_t got, std::size_t want) {
  if (got != want)
    throw Error(ErrorCode::LengthMismatch,
                "vector has " + std::to_string(got) + " entries, grid has " + std::to_string(want));
}

}  // namespace

BinomialTable::BinomialTable(int max_order)
    : max_order_(std::max(max_order, 1)),
      entries_(static_cast<std::size_t>(max_order_) * static_cast<std::size_t>(max_order_), 0.0) {
  auto at = [&](int r, int s) -> double& {
    return entries_[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(max_order_) +
                    static_cast<std::size_t>(s - 1)];
  };
  for (int r = 1; r <= max_order_; ++r) {
    at(r, 1) = 1.0;
    at(r, r) = 1.0;
    for (int s = 2; s < r; ++s) at(r, s) = at(r - 1, s - 1) + at(r - 1, s);
  }
  if (g_binomial_fault.load() && max_order_ >= 3) at(3, 2) += 1.0;
}

namespace testing {
void inject_binomial_fault(bool enabled) { g_binomial_fault.store(enabled); }
bool binomial_fault_enabled() { return g_binomial_fault.load(); }
}  // namespace testing

std::vector<double> apply_lower(std::span<const double> x, int k) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "apply_lower needs a nonempty vector");
  if (k < 1) throw Error(ErrorCode::ConfigInvalid, "power must be >= 1");
  BinomialTable binom(k + 1);
  std::vector<double> acc(static_cast<std::size_t>(k) + 1);
  std::vector<double> y(x.size());
  kernels::PlainArith ar;
  kernels::lower_scan(x.data(), 1, y.data(), 1, x.size(), k, binom, acc.data(), ar);
  return y;
}

std::vector<double> apply_upper(std::span<const double> x, int k) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "apply_upper needs a nonempty vector");
  if (k < 1) throw Error(ErrorCode::ConfigInvalid, "power must be >= 1");
  BinomialTable binom(k + 1);
  std::vector<double> acc(static_cast<std::size_t>(k) + 1);
  std::vector<double> y(x.size());
  const auto last = static_cast<std::ptrdiff_t>(x.size()) - 1;
  kernels::PlainArith ar;
  kernels::lower_scan(x.data() + last, -1, y.data() + last, -1, x.size(), k, binom, acc.data(),
                      ar);
  return y;
}

OperationCount count_lower_operations(std::span<const double> x, int k) {
  if (x.empty()) throw Error(ErrorCode::EmptyInput, "count_lower_operations needs input");
  BinomialTable binom(k + 1);
  std::vector<double> acc(static_cast<std::size_t>(k) + 1);
  std::vector<double> y(x.size());
  OperationCount count;
  kernels::CountingArith ar{&count};
  kernels::lower_scan(x.data(), 1, y.data(), 1, x.size(), k, binom, acc.data(), ar);
  return count;
}

std::vector<double> apply_distance(std::span<const double> x, const Grid& grid,
                                   std::optional<int> power) {
  check_length(x.size(), point_count(grid));
  const Operator op = make_operator(grid, power);
  Scratch sc(op);
  std::vector<double> y(x.size());
  apply_strided(op, x.data(), 1, y.data(), 1, sc);
  return y;
}

std::vector<double> apply_distance_1d(std::span<const double> x, const UniformGrid1D& grid,
                                      std::optional<int> power) {
  return apply_distance(x, Grid{grid}, power);
}

std::vector<double> apply_distance_2d(std::span<const double> x, const UniformGrid2D& grid,
                                      std::optional<int> power) {
  if (x.size() != grid.points()) {
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(x.size()))));
    if (side * side != x.size())
      throw Error(ErrorCode::NotSquareGrid,
                  std::to_string(x.size()) + " entries cannot form a square grid");
  }
  return apply_distance(x, Grid{grid}, power);
}

Matrix triple_product(const Matrix& plan, const Grid& gx, const Grid& gy, Execution exec) {
  check_plan_dims(plan, gx, gy);
  const Operator opx = make_operator(gx, std::nullopt);
  const Operator opy = make_operator(gy, std::nullopt);
  const std::size_t m = plan.rows();
  const std::size_t n = plan.cols();
  const bool par = exec == Execution::parallel;

  // Z = plan * D_Y, row by row (D_Y is symmetric).
  Matrix z(m, n);
#pragma omp parallel if (par)
  {
    Scratch sc(opy);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i)
      apply_strided(opy, plan.data() + i * static_cast<std::ptrdiff_t>(n), 1,
                    z.data() + i * static_cast<std::ptrdiff_t>(n), 1, sc);
  }

  // R = D_X * Z, column by column, without transposing Z.
  Matrix out(m, n);
  if (std::holds_alternative<UniformGrid1D>(gx)) {
    const auto blocks = static_cast<std::ptrdiff_t>((n + kColumnBlock - 1) / kColumnBlock);
#pragma omp parallel if (par)
    {
      BinomialTable binom(opx.power + 2);
      std::vector<double> acc;
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        const std::size_t c0 = static_cast<std::size_t>(b) * kColumnBlock;
        const std::size_t c1 = std::min(n, c0 + kColumnBlock);
        kernels::distance_scan_columns(z.data(), out.data(), m, n, c0, c1, opx.power, opx.scale,
                                       binom, acc);
      }
    }
  } else {
#pragma omp parallel if (par)
    {
      Scratch sc(opx);
#pragma omp for schedule(static)
      for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(n); ++p)
        apply_strided(opx, z.data() + p, static_cast<std::ptrdiff_t>(n), out.data() + p,
                      static_cast<std::ptrdiff_t>(n), sc);
    }
  }
  return out;
}

Matrix triple_product_1d(const Matrix& plan, const UniformGrid1D& gx, const UniformGrid1D& gy,
                         Execution exec) {
  return triple_product(plan, Grid{gx}, Grid{gy}, exec);
}

Matrix triple_product_2d(const Matrix& plan, const UniformGrid2D& gx, const UniformGrid2D& gy,
                         Execution exec) {
  return triple_product(plan, Grid{gx}, Grid{gy}, exec);
}

namespace reference {

Matrix triple_product(const Matrix& plan, const Grid& gx, const Grid& gy) {
  check_plan_dims(plan, gx, gy);
  const Operator opx = make_operator(gx, std::nullopt);
  const Operator opy = make_operator(gy, std::nullopt);
  const auto m = static_cast<std::ptrdiff_t>(plan.rows());
  const auto n = static_cast<std::ptrdiff_t>(plan.cols());
  Scratch sx(opx), sy(opy);
  Matrix z(plan.rows(), plan.cols());
  for (std::ptrdiff_t i = 0; i < m; ++i)
    apply_strided(opy, plan.data() + i * n, 1, z.data() + i * n, 1, sy);
  Matrix out(plan.rows(), plan.cols());
  for (std::ptrdiff_t p = 0; p < n; ++p) apply_strided(opx, z.data() + p, n, out.data() + p, n, sx);
  return out;
}

}  // namespace reference

double magnitude_bound(const Grid& grid, int power) {
  double extent = 0.0;
  if (const auto* g1 = std::get_if<UniformGrid1D>(&grid))
    extent = static_cast<double>(g1->size - 1);
  else
    extent = 2.0 * static_cast<double>(std::get<UniformGrid2D>(grid).side - 1);
  return std::pow(grid_spacing(grid) * extent, power);
}

Matrix dense_distance_matrix(const Grid& grid, std::optional<int> power, bool force) {
  const std::size_t np = point_count(grid);
  if (np > kMaterializeLimit && !force)
    throw Error(ErrorCode::TooLargeToMaterialize,
                std::to_string(np) + " points exceeds the dense limit of " +
                    std::to_string(kMaterializeLimit));
  const int p = power.value_or(grid_power(grid));
  const double scale = kernels::int_pow(grid_spacing(grid), p);
  Matrix d(np, np);
  if (std::holds_alternative<UniformGrid1D>(grid)) {
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) {
        const double gap = i > j ? double(i - j) : double(j - i);
        d(i, j) = scale * kernels::int_pow(gap, p);
      }
  } else {
    const std::size_t n = std::get<UniformGrid2D>(grid).side;
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = 0; b < np; ++b) {
        const std::size_t ia = a % n, ja = a / n, ib = b % n, jb = b / n;
        const double gap = double(ia > ib ? ia - ib : ib - ia) + double(ja > jb ? ja - jb : jb - ja);
        d(a, b) = scale * kernels::int_pow(gap, p);
      }
  }
  return d;
}

Matrix naive_triple_product(const Matrix& plan, const Grid& gx, const Grid& gy, bool force) {
  check_plan_dims(plan, gx, gy);
  return naive_triple_product(plan, dense_distance_matrix(gx, std::nullopt, force),
                              dense_distance_matrix(gy, std::nullopt, force));
}

Matrix naive_triple_product(const Matrix& plan, const Matrix& dx, const Matrix& dy) {
  const std::size_t m = plan.rows();
  const std::size_t n = plan.cols();
  if (dx.rows() != m || dx.cols() != m || dy.rows() != n || dy.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "distance matrices do not match the plan");

  auto dot = [](const double* a, const double* b, std::size_t len) {
    double s = 0.0;
    for (std::size_t t = 0; t < len; ++t) s += a[t] * b[t];
    return s;
  };

  // T = plan * D_Y, stored transposed so both products are row inner products.
  Matrix tt(n, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < n; ++p) tt(p, i) = dot(plan.row(i).data(), dy.row(p).data(), n);
  Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < n; ++p) out(i, p) = dot(dx.row(i).data(), tt.row(p).data(), m);
  return out;
}

}  // namespace fgc
