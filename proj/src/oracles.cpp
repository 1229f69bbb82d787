#include "fgc/oracles.hpp"

#include <cmath>

#include "fgc/error.hpp"

namespace fgc::oracle {

Matrix distance_matrix(const Grid& grid) {
  const std::size_t np = point_count(grid);
  const int k = grid_power(grid);
  const double hk = std::pow(grid_spacing(grid), k);
  Matrix d(np, np);
  std::size_t side = np;
  const bool two_d = std::holds_alternative<UniformGrid2D>(grid);
  if (two_d) side = std::get<UniformGrid2D>(grid).side;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < np; ++b) {
      double gap;
      if (two_d) {
        const double di = std::abs(double(a % side) - double(b % side));
        const double dj = std::abs(double(a / side) - double(b / side));
        gap = di + dj;
      } else {
        gap = std::abs(double(a) - double(b));
      }
      d(a, b) = hk * std::pow(gap, k);
    }
  return d;
}

Matrix lower_matrix(std::size_t n, int k) {
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) l(i, j) = std::pow(double(i - j), k);
  return l;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double gw_objective(const Matrix& plan, const Matrix& dx, const Matrix& dy) {
  const std::size_t m = plan.rows(), n = plan.cols();
  double e = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
          const double d = dx(i, j) - dy(p, q);
          e += d * d * plan(i, p) * plan(j, q);
        }
  return e;
}

Matrix gw_gradient(const Matrix& plan, const Matrix& dx, const Matrix& dy) {
  const std::size_t m = plan.rows(), n = plan.cols();
  Matrix g(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < n; ++p) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t q = 0; q < n; ++q) {
          const double d = dx(i, j) - dy(p, q);
          s += d * d * plan(j, q);
        }
      g(i, p) = 2.0 * s;
    }
  return g;
}

double fgw_objective(const Matrix& plan, const Matrix& dx, const Matrix& dy, const Matrix& cost,
                     double theta) {
  double linear = 0.0;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t p = 0; p < plan.cols(); ++p)
      linear += cost(i, p) * cost(i, p) * plan(i, p);
  return (1.0 - theta) * linear + theta * gw_objective(plan, dx, dy);
}

Matrix fgw_gradient(const Matrix& plan, const Matrix& dx, const Matrix& dy, const Matrix& cost,
                    double theta) {
  Matrix g = gw_gradient(plan, dx, dy);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t p = 0; p < g.cols(); ++p)
      g(i, p) = (1.0 - theta) * cost(i, p) * cost(i, p) + theta * g(i, p);
  return g;
}

Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f,
                                  const Matrix& plan, double delta) {
  Matrix g(plan.rows(), plan.cols());
  Matrix work = plan;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t p = 0; p < plan.cols(); ++p) {
      const double orig = work(i, p);
      work(i, p) = orig + delta;
      const double up = f(work);
      work(i, p) = orig - delta;
      const double down = f(work);
      work(i, p) = orig;
      g(i, p) = (up - down) / (2.0 * delta);
    }
  return g;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "relative_error");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace fgc::oracle
