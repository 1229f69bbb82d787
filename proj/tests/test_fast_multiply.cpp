#include <doctest.h>

#include <algorithm>

#include "fgc/fast_multiply.hpp"
#include "fgc/oracles.hpp"
#include "helpers.hpp"

using namespace fgc;
using fgc::test::code_of;
using fgc::test::random_vector;

TEST_CASE("apply_lower small cases") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(apply_lower(ones, 1) == std::vector<double>{0, 1, 3});
  CHECK(apply_lower(ones, 2) == std::vector<double>{0, 1, 5});
  CHECK(apply_lower(std::vector<double>{2.5}, 3) == std::vector<double>{0});
  CHECK(code_of([] { apply_lower(std::vector<double>{}, 1); }) == ErrorCode::EmptyInput);
}

TEST_CASE("apply_upper small cases") {
  const std::vector<double> ones{1, 1, 1};
  CHECK(apply_upper(ones, 1) == std::vector<double>{3, 1, 0});
  CHECK(apply_upper(std::vector<double>(17, 0.0), 3) == std::vector<double>(17, 0.0));
}

TEST_CASE("apply_lower matches the dense lower triangle") {
  for (int k = 1; k <= 4; ++k)
    for (std::size_t n : {2u, 7u, 64u, 300u}) {
      const auto x = random_vector(n, 11 * n + k);
      const auto want = oracle::matvec(oracle::lower_matrix(n, k), x);
      CHECK(oracle::relative_error(apply_lower(x, k), want) <= 1e-12);
    }
}

TEST_CASE("apply_upper is apply_lower reversed, bit for bit") {
  for (int k = 1; k <= 3; ++k) {
    auto x = random_vector(64, 5 + k);
    const auto up = apply_upper(x, k);
    std::reverse(x.begin(), x.end());
    auto low = apply_lower(x, k);
    std::reverse(low.begin(), low.end());
    CHECK(up == low);
  }
}

TEST_CASE("operation counts follow the closed form") {
  const auto x = random_vector(100, 1);
  for (int k = 1; k <= 5; ++k) {
    const auto c = count_lower_operations(x, k);
    CHECK(c.multiplications == 99u * k * (k + 1) / 2);
    CHECK(c.additions == 99u * (k + 1) * (k + 2) / 2);
  }
}

TEST_CASE("binomial table") {
  const BinomialTable t(6);
  CHECK(t(1, 1) == 1);
  CHECK(t(5, 3) == 6);  // C(4, 2)
  CHECK(t.choose(5, 2) == 10);
  testing::inject_binomial_fault(true);
  const BinomialTable bad(4);
  testing::inject_binomial_fault(false);
  CHECK(bad(3, 2) == 3);
  CHECK(BinomialTable(4)(3, 2) == 2);
}

TEST_CASE("1D distance products") {
  const std::vector<double> e0{1, 0, 0};
  CHECK(apply_distance_1d(e0, UniformGrid1D(3, 1.0, 1)) == std::vector<double>{0, 1, 2});
  CHECK(apply_distance_1d(e0, UniformGrid1D(3, 2.0, 1)) == std::vector<double>{0, 2, 4});

  const UniformGrid1D g(128, 0.01, 2);
  const auto x = random_vector(128, 3);
  CHECK(oracle::relative_error(apply_distance_1d(x, g), oracle::matvec(oracle::distance_matrix(g), x)) <= 1e-12);
  CHECK(code_of([&] { apply_distance(x, Grid(UniformGrid1D(5, 1.0, 1))); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("power override evaluates another power on the same grid") {
  const UniformGrid1D g(40, 0.1, 1);
  const auto x = random_vector(40, 8);
  const auto want = oracle::matvec(oracle::distance_matrix(UniformGrid1D(40, 0.1, 2)), x);
  CHECK(oracle::relative_error(apply_distance_1d(x, g, 2), want) <= 1e-12);
}

TEST_CASE("2D distance products") {
  const UniformGrid2D g2(2, 1.0, 1);
  CHECK(apply_distance_2d(std::vector<double>{1, 0, 0, 0}, g2) == std::vector<double>{0, 1, 1, 2});
  CHECK(apply_distance_2d(std::vector<double>(9, 0.0), UniformGrid2D(3, 1.0, 2)) ==
        std::vector<double>(9, 0.0));
  for (int k = 1; k <= 3; ++k) {
    const UniformGrid2D g(16, 1.0 / 15, k);
    const auto x = random_vector(256, 20 + k);
    CHECK(oracle::relative_error(apply_distance_2d(x, g), oracle::matvec(oracle::distance_matrix(g), x)) <= 1e-12);
  }
  CHECK(code_of([] { apply_distance_2d(std::vector<double>(5, 1.0), UniformGrid2D(2, 1.0, 1)); }) ==
        ErrorCode::NotSquareGrid);
  CHECK(code_of([] { apply_distance_2d(std::vector<double>(9, 1.0), UniformGrid2D(2, 1.0, 1)); }) ==
        ErrorCode::LengthMismatch);
}

TEST_CASE("triple product small cases") {
  const Grid g = UniformGrid1D(2, 1.0, 1);
  const Matrix quarter(2, 2, 0.25);
  CHECK(triple_product(quarter, g, g) == quarter);
  CHECK(triple_product(Matrix(5, 3), UniformGrid1D(5, 1.0, 2), UniformGrid1D(3, 1.0, 1)) == Matrix(5, 3));

  // I / 4 on the 2 x 2 grid gives D^2 / 4.
  const Grid g2 = UniformGrid2D(2, 1.0, 1);
  Matrix id(4, 4);
  for (std::size_t i = 0; i < 4; ++i) id(i, i) = 0.25;
  const Matrix d = oracle::distance_matrix(g2);
  Matrix want = oracle::matmul(d, d);
  for (double& x : want.values()) x *= 0.25;
  CHECK(triple_product(id, g2, g2) == want);
}

TEST_CASE("triple product matches the dense oracle") {
  for (int k = 1; k <= 2; ++k) {
    const Grid gx = UniformGrid1D(100, 0.01, k), gy = UniformGrid1D(100, 0.02, k);
    const Matrix p = fgc::test::random_matrix(100, 100, 40 + k);
    const Matrix want = oracle::matmul(oracle::matmul(oracle::distance_matrix(gx), p),
                                       oracle::distance_matrix(gy));
    CHECK(fgc::test::rel_fro(triple_product(p, gx, gy), want) <= 1e-12);
  }
  const Grid g = UniformGrid2D(8, 1.0 / 7, 1);
  const Matrix p = fgc::test::random_matrix(64, 64, 9);
  const Matrix d = oracle::distance_matrix(g);
  CHECK(fgc::test::rel_fro(triple_product(p, g, g), oracle::matmul(oracle::matmul(d, p), d)) <= 1e-12);
}

TEST_CASE("mixed grids: 2D source, 1D target with different powers") {
  const Grid gx = UniformGrid2D(6, 0.2, 2), gy = UniformGrid1D(50, 0.02, 3);
  const Matrix p = fgc::test::random_matrix(36, 50, 2);
  const Matrix want = oracle::matmul(oracle::matmul(oracle::distance_matrix(gx), p),
                                     oracle::distance_matrix(gy));
  CHECK(fgc::test::rel_fro(triple_product(p, gx, gy), want) <= 1e-12);
  CHECK(code_of([&] { triple_product(Matrix(35, 50), gx, gy); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("parallel, serial and reference triple products agree bitwise") {
  for (const auto& [gx, gy] : std::vector<std::pair<Grid, Grid>>{
           {UniformGrid1D(130, 0.01, 1), UniformGrid1D(200, 0.005, 2)},
           {UniformGrid2D(9, 0.1, 2), UniformGrid1D(70, 0.01, 1)},
           {UniformGrid1D(33, 0.1, 3), UniformGrid2D(7, 0.3, 1)}}) {
    const Matrix p = fgc::test::random_matrix(point_count(gx), point_count(gy), 77);
    const Matrix ref = reference::triple_product(p, gx, gy);
    CHECK(triple_product(p, gx, gy, Execution::serial) == ref);
    CHECK(triple_product(p, gx, gy, Execution::parallel) == ref);
  }
}

TEST_CASE("dense distance matrices") {
  const Matrix d1 = dense_distance_matrix(UniformGrid1D(3, 1.0, 1));
  CHECK(d1(0, 2) == 2);
  CHECK(d1(1, 0) == 1);
  const Matrix d2 = dense_distance_matrix(UniformGrid1D(3, 0.5, 2));
  CHECK(d2(0, 1) == 0.25);
  CHECK(d2(0, 2) == 1.0);
  CHECK(d2(2, 2) == 0.0);
  CHECK(code_of([] { dense_distance_matrix(UniformGrid1D(kMaterializeLimit + 1, 1.0, 1)); }) ==
        ErrorCode::TooLargeToMaterialize);
}

TEST_CASE("naive and fast triple products agree") {
  const Grid g = UniformGrid1D(200, 1.0 / 199, 1);
  const Matrix p = fgc::test::random_matrix(200, 200, 5);
  const Matrix fast = triple_product(p, g, g);
  CHECK(fgc::test::rel_fro(naive_triple_product(p, g, g), fast) <= 1e-12);
}

TEST_CASE("magnitude bound") {
  CHECK(magnitude_bound(UniformGrid1D(11, 0.1, 2), 2) == doctest::Approx(1.0));
  CHECK(magnitude_bound(UniformGrid2D(3, 1.0, 1), 3) == doctest::Approx(64.0));
}
