#pragma once

// Products with power-distance matrices on uniform grids.
//
// On a 1D grid the distance matrix is h^k (L + L^T) where L is strictly lower
// triangular with L[i][j] = (i - j)^k. A product L x is evaluated in O(k^2 N)
// by carrying the partial power sums
//
//   a_r(i) = sum_{j < i} (i - j)^(r-1) x_j,    r = 1..k+1,
//
// which advance from i to i+1 through the binomial expansion
//
//   a_r(i+1) = x_i + sum_{s=1..r} C(r-1, s-1) a_s(i),
//
// so that (L x)_i = a_{k+1}(i). L^T x is the same scan run backwards.
// A 2D grid of side n expands (|di| + |dj|)^k binomially into Kronecker
// terms D1^(k-r) (x) D1^r, each applied as a column pass and a row pass of
// the 1D kernel (power 0 being the all-ones matrix).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc {

/// Triangular table of C(r-1, s-1) for 1 <= s <= r <= max_order, stored as
/// doubles (exact up to order ~57, rounded beyond).
class BinomialTable {
 public:
  explicit BinomialTable(int max_order);

  int max_order() const noexcept { return max_order_; }

  /// One-based access matching the recurrence: returns C(r-1, s-1).
  double operator()(int r, int s) const noexcept {
    return entries_[static_cast<std::size_t>(r - 1) * static_cast<std::size_t>(max_order_) +
                    static_cast<std::size_t>(s - 1)];
  }

  /// Plain C(n, m) for 0 <= m <= n < max_order.
  double choose(int n, int m) const noexcept { return (*this)(n + 1, m + 1); }

 private:
  int max_order_;
  std::vector<double> entries_;
};

namespace testing {
/// Fault hook for the verify command: while enabled, every new BinomialTable
/// has C(2, 1) perturbed.
void inject_binomial_fault(bool enabled);
bool binomial_fault_enabled();
}  // namespace testing

struct OperationCount {
  std::uint64_t multiplications = 0;
  std::uint64_t additions = 0;
};

/// y_i = sum_{j<i} (i-j)^k x_j
std::vector<double> apply_lower(std::span<const double> x, int k);
/// y_i = sum_{j>i} (j-i)^k x_j
std::vector<double> apply_upper(std::span<const double> x, int k);

/// Runs apply_lower through an instrumented arithmetic policy and returns
/// the floating-point operations the recursion performed.
OperationCount count_lower_operations(std::span<const double> x, int k);

/// h^p (L + L^T) x with p = power.value_or(grid.power).
std::vector<double> apply_distance_1d(std::span<const double> x, const UniformGrid1D& grid,
                                      std::optional<int> power = std::nullopt);
/// h^p D_hat^(p) x on a column-major flattened side x side grid.
std::vector<double> apply_distance_2d(std::span<const double> x, const UniformGrid2D& grid,
                                      std::optional<int> power = std::nullopt);
std::vector<double> apply_distance(std::span<const double> x, const Grid& grid,
                                   std::optional<int> power = std::nullopt);

/// D_X * plan * D_Y. The grids may differ in size, spacing, power and dimension.
/// Rows and column blocks are distributed over OpenMP threads when
/// `exec == Execution::parallel`; each row/column keeps a fixed summation
/// order, so the result does not depend on the thread count.
Matrix triple_product(const Matrix& plan, const Grid& gx, const Grid& gy,
                      Execution exec = Execution::serial);
Matrix triple_product_1d(const Matrix& plan, const UniformGrid1D& gx, const UniformGrid1D& gy,
                         Execution exec = Execution::serial);
Matrix triple_product_2d(const Matrix& plan, const UniformGrid2D& gx, const UniformGrid2D& gy,
                         Execution exec = Execution::serial);

namespace reference {
/// Straightforward serial version of triple_product: one vector at a time,
/// strided column access. Kept as the baseline the parallel kernels are
/// checked against bit for bit.
Matrix triple_product(const Matrix& plan, const Grid& gx, const Grid& gy);
}  // namespace reference

/// Largest entry of the (scaled) distance matrix raised to `power`.
double magnitude_bound(const Grid& grid, int power);
inline constexpr double kMagnitudeWarning = 1e15;

inline constexpr std::size_t kMaterializeLimit = 8192;

/// Entrywise construction of the distance matrix (optionally at another power).
Matrix dense_distance_matrix(const Grid& grid, std::optional<int> power = std::nullopt,
                             bool force = false);

/// Dense O(M^2 N + M N^2) evaluation of D_X * plan * D_Y using row inner
/// products, the baseline the fast path is compared with.
Matrix naive_triple_product(const Matrix& plan, const Grid& gx, const Grid& gy,
                            bool force = false);
/// Same, with caller-supplied distance matrices (used by the solver to avoid
/// rebuilding them every outer iteration).
Matrix naive_triple_product(const Matrix& plan, const Matrix& dx, const Matrix& dy);

}  // namespace fgc
