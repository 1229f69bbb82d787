#include <doctest.h>

#include <cmath>

#include "fgc/error.hpp"
#include "fgc/types.hpp"
#include "helpers.hpp"

using namespace fgc;

using fgc::test::code_of;

TEST_CASE("validate_measure accepts normalized weights unchanged") {
  const auto m = validate_measure({0.5, 0.5}, UniformGrid1D(2, 1.0, 1));
  CHECK(m.weights() == std::vector<double>{0.5, 0.5});
}

TEST_CASE("validate_measure rejects bad weights") {
  const Grid g = UniformGrid1D(2, 1.0, 1);
  CHECK(code_of([&] { validate_measure({1.0, 1.0}, g); }) == ErrorCode::NotNormalized);
  CHECK(code_of([&] { validate_measure({1.5, -0.5}, g); }) == ErrorCode::NegativeWeight);
  CHECK(code_of([&] { validate_measure({1.0}, g); }) == ErrorCode::WrongLength);
  CHECK(code_of([&] { validate_measure({std::nan(""), 1.0}, g); }) == ErrorCode::NegativeWeight);
  CHECK(code_of([] { UniformGrid1D(3, 0.0, 1); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { UniformGrid1D(3, 1.0, 0); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("weights within the band are renormalized") {
  const auto m = validate_measure({0.25, 0.25, 0.25, 0.25 + 1e-12}, UniformGrid1D(4, 1.0, 1));
  double s = 0.0;
  for (double w : m.weights()) s += w;
  CHECK(std::abs(s - 1.0) < 1e-15);
}

TEST_CASE("validation is idempotent") {
  const auto m = validate_measure({0.2, 0.3, 0.5 + 1e-11}, UniformGrid1D(3, 1.0, 1));
  CHECK(validate_measure(m) == m);
}

TEST_CASE("2D grids must be square") {
  CHECK(UniformGrid2D::from_points(16, 1.0, 1).side == 4);
  CHECK(code_of([] { UniformGrid2D::from_points(15, 1.0, 1); }) == ErrorCode::NotSquareGrid);
  const auto m = validate_measure(std::vector<double>(9, 1.0 / 9), UniformGrid2D(3, 0.5, 2));
  CHECK(point_count(m.grid()) == 9);
  CHECK(grid_power(m.grid()) == 2);
  CHECK(grid_spacing(m.grid()) == 0.5);
}

TEST_CASE("entropy") {
  CHECK(entropy(Matrix(1, 1, 1.0)) == -1.0);
  CHECK(entropy(Matrix(2, 2, 0.25)) == doctest::Approx(std::log(0.25) - 1.0).epsilon(1e-14));
  Matrix z(2, 2, 0.5);
  z(0, 1) = z(1, 0) = 0.0;
  CHECK(std::isfinite(entropy(z)));
  CHECK(entropy(z) == doctest::Approx(std::log(0.5) - 1.0));
  z(0, 1) = -0.1;
  CHECK(code_of([&] { entropy(z); }) == ErrorCode::NegativeEntry);
}

TEST_CASE("independent plan and marginal violation") {
  const auto u = validate_measure({0.25, 0.75}, UniformGrid1D(2, 1.0, 1));
  const auto v = validate_measure({0.5, 0.3, 0.2}, UniformGrid1D(3, 1.0, 1));
  auto p = independent_plan(u, v);
  CHECK(p.marginal_violation() < 1e-16);
  p.values(0, 0) += 1e-3;
  CHECK(p.marginal_violation() == doctest::Approx(1e-3));
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.effective_tau() == c.epsilon);
  c.theta = 1.5;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::ThetaOutOfRange);
  c.theta = 0.5;
  c.epsilon = 0.0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::ConfigInvalid);
  c.epsilon = 0.01;
  c.outer_iterations = 0;
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("matrix helpers") {
  Matrix a(2, 3);
  a(0, 2) = 1.0;
  a(1, 0) = 2.0;
  const Matrix t = transpose(a);
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == 1.0);
  CHECK(row_sums(a) == std::vector<double>{1.0, 2.0});
  CHECK(col_sums(a) == std::vector<double>{2.0, 0.0, 1.0});
  CHECK(inner(a, a) == 5.0);
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(5.0)));
}
