#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <doctest.h>

#include "fgc/error.hpp"
#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc::test {

/// Runs f and returns the code of the fgc::Error it throws.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an fgc::Error");
  return ErrorCode::ParseError;
}

inline Matrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed, double lo = 0.0,
                            double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  Matrix a(m, n);
  for (double& x : a.values()) x = d(rng);
  return a;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

inline double rel_fro(const Matrix& a, const Matrix& b) {
  return frobenius_diff(a, b) / frobenius_norm(b);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fgc_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline UniformGrid1D unit_grid(std::size_t n, int k = 1) {
  return UniformGrid1D(n, n > 1 ? 1.0 / double(n - 1) : 1.0, k);
}

}  // namespace fgc::test
