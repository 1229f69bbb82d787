#include <doctest.h>

#include <fstream>

#include "fgc/experiments.hpp"
#include "fgc/io.hpp"
#include "fgc/solver.hpp"
#include "helpers.hpp"

using namespace fgc;
using fgc::test::code_of;

TEST_CASE("shortest round-trip doubles") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e-300) == "1e-300");
  for (double x : {1.0 / 3.0, 2.0 / 7.0, 123456.789e-17})
    CHECK(std::stod(io::format_double(x)) == x);
}

TEST_CASE("measure CSV formats") {
  const auto dir = fgc::test::scratch_dir("measure");
  std::ofstream(dir / "plain.csv") << "# weights\n0.25\n\n0.75\n";
  std::ofstream(dir / "indexed.csv") << "1,0.75\n0,0.25\n";
  std::ofstream(dir / "bad.csv") << "0.5\nabc\n";
  CHECK(io::read_measure_csv(dir / "plain.csv") == std::vector<double>{0.25, 0.75});
  CHECK(io::read_measure_csv(dir / "indexed.csv") == std::vector<double>{0.25, 0.75});
  CHECK(code_of([&] { io::read_measure_csv(dir / "bad.csv"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { io::read_measure_csv(dir / "missing.csv"); }) == ErrorCode::FileNotFound);
}

TEST_CASE("matrix CSV round trip is exact") {
  const auto dir = fgc::test::scratch_dir("matrix");
  const Matrix m = fgc::test::random_matrix(7, 5, 3, -1.0, 1.0);
  io::write_matrix_csv(dir / "m.csv", m);
  CHECK(io::read_matrix_csv(dir / "m.csv") == m);
  std::ofstream(dir / "ragged.csv") << "1,2\n3\n";
  CHECK(code_of([&] { io::read_matrix_csv(dir / "ragged.csv"); }) == ErrorCode::ParseError);
}

TEST_CASE("plan files reproduce the marginal violation") {
  const auto dir = fgc::test::scratch_dir("plan");
  const auto u = gen_random_measure_1d(60, 1), v = gen_random_measure_1d(50, 2);
  SolverConfig c;
  c.epsilon = 0.01;
  c.outer_iterations = 3;
  const auto r = entropic_gw(u, v, c);

  io::write_matrix_csv(dir / "dense.csv", r.plan.values);
  const Matrix dense = io::read_plan_csv(dir / "dense.csv", 60, 50);
  CHECK(dense == r.plan.values);

  io::write_plan_triplets(dir / "sparse.csv", r.plan.values, 1e-12);
  const Matrix sparse = io::read_plan_csv(dir / "sparse.csv", 60, 50);
  const TransportPlan back{sparse, u.weights(), v.weights()};
  CHECK(std::abs(back.marginal_violation() - r.plan.marginal_violation()) <= 1e-9);

  CHECK(code_of([&] { io::read_plan_csv(dir / "dense.csv", 50, 60); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("PGM round trip") {
  const auto dir = fgc::test::scratch_dir("pgm");
  const auto img = synthetic_digit(20);
  io::write_pgm(dir / "d.pgm", img);
  const auto back = io::read_pgm(dir / "d.pgm");
  REQUIRE(back.width == 20);
  REQUIRE(back.height == 20);
  for (std::size_t t = 0; t < img.pixels.size(); ++t)
    CHECK(std::abs(back.pixels[t] - img.pixels[t]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("ASCII PGM and CSV images") {
  const auto dir = fgc::test::scratch_dir("ascii");
  std::ofstream(dir / "a.pgm") << "P2\n# comment\n2 2\n255\n0 255\n51 102\n";
  const auto a = io::read_image(dir / "a.pgm");
  CHECK(a.at(0, 1) == 1.0);
  CHECK(a.at(1, 0) == doctest::Approx(0.2));
  std::ofstream(dir / "b.csv") << "0,1\n0.5,2\n";
  const auto b = io::read_image(dir / "b.csv");
  CHECK(b.at(1, 1) == 1.0);  // clamped
  std::ofstream(dir / "c.png") << "x";
  CHECK(code_of([&] { io::read_image(dir / "c.png"); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([&] { io::read_image(dir / "nope.pgm"); }) == ErrorCode::FileNotFound);
  std::ofstream(dir / "bad.pgm") << "P7\n";
  CHECK(code_of([&] { io::read_image(dir / "bad.pgm"); }) == ErrorCode::UnsupportedFormat);
}
