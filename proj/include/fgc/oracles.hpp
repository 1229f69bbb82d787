#pragma once

// Brute-force references used by the test suites and the `verify` command.
// Nothing in the solver path calls into this header.

#include <functional>
#include <span>
#include <vector>

#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc::oracle {

/// Distance matrix built with std::pow, independently of the kernels' scaling.
Matrix distance_matrix(const Grid& grid);
/// Strictly lower triangular (i - j)^k.
Matrix lower_matrix(std::size_t n, int k);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);

/// sum_{i,j,p,q} (dx_ij - dy_pq)^2 P_ip P_jq
double gw_objective(const Matrix& plan, const Matrix& dx, const Matrix& dy);
/// 2 sum_{j,q} (dx_ij - dy_pq)^2 P_jq
Matrix gw_gradient(const Matrix& plan, const Matrix& dx, const Matrix& dy);
double fgw_objective(const Matrix& plan, const Matrix& dx, const Matrix& dy, const Matrix& cost,
                     double theta);
Matrix fgw_gradient(const Matrix& plan, const Matrix& dx, const Matrix& dy, const Matrix& cost,
                    double theta);

/// Central differences (f(P + d e_ip) - f(P - d e_ip)) / 2d for every entry.
Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f,
                                  const Matrix& plan, double delta);

/// ||a - b|| / ||b|| in the Euclidean / Frobenius sense (||b|| = 0 gives ||a - b||).
double relative_error(std::span<const double> a, std::span<const double> b);

}  // namespace fgc::oracle
