#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fgc/experiments.hpp"
#include "fgc/solver.hpp"
#include "helpers.hpp"

using namespace fgc;
using fgc::test::code_of;

TEST_CASE("random measures") {
  CHECK(gen_random_measure_1d(1, 5).weights() == std::vector<double>{1.0});
  CHECK(gen_random_measure_1d(30, 9) == gen_random_measure_1d(30, 9));
  CHECK_FALSE(gen_random_measure_1d(30, 9) == gen_random_measure_1d(30, 10));
  const auto m = gen_random_measure_1d(1000, 123);
  double total = 0.0;
  for (double w : m.weights()) {
    CHECK(w > 0.0);
    total += w;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(point_count(gen_random_measure_2d(7, 1).grid()) == 49);
}

TEST_CASE("coordinate cost") {
  const Grid a = UniformGrid1D(3, 0.5, 1), b = UniformGrid1D(2, 1.0, 1);
  const auto c = coordinate_cost(a, b);
  CHECK(c.values(2, 0) == 1.0);
  CHECK(c.values(1, 1) == 0.5);
  const auto c2 = coordinate_cost(UniformGrid2D(2, 1.0, 1), UniformGrid2D(2, 1.0, 1));
  CHECK(c2.values(0, 3) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("two-hump generator") {
  const auto p = gen_two_hump_series(400, {0.2, 0.7}, {0.3, 0.6});
  CHECK(p.source.size() == 400);
  CHECK(!p.source_support[0].empty());
  CHECK(!p.target_support[1].empty());
  CHECK(p.cost.values.rows() == 400);
  CHECK(code_of([] { gen_two_hump_series(2, {0.2, 0.7}, {0.3, 0.6}); }) == ErrorCode::ConfigInvalid);
  CHECK(code_of([] { gen_two_hump_series(100, {0.2, 0.25}, {0.3, 0.6}); }) == ErrorCode::OverlappingHumps);
}

TEST_CASE("aligned humps stay near the diagonal") {
  const std::size_t n = 200;
  const auto p = gen_two_hump_series(n, {0.25, 0.7}, {0.25, 0.7});
  const auto r = entropic_fgw(p.source, p.target, p.cost, SolverConfig{});
  double band = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q < n; ++q)
      if (std::abs(double(i) - double(q)) <= double(n) / 20) band += r.plan.values(i, q);
  CHECK(band >= 0.9);
}

TEST_CASE("mass fraction") {
  Matrix p(2, 2);
  p(0, 0) = 0.3;
  p(0, 1) = 0.1;
  p(1, 1) = 0.6;
  const std::vector<std::size_t> r0{0}, c0{0};
  CHECK(mass_fraction(p, r0, c0) == doctest::Approx(0.75));
}

TEST_CASE("image measures") {
  io::GrayscaleImage white{4, 4, std::vector<double>(16, 1.0)};
  const auto m = image_measure(white, 1.0);
  for (double w : m.weights()) CHECK(w == 1.0 / 16);

  io::GrayscaleImage dot{3, 3, std::vector<double>(9, 0.0)};
  dot.pixels[1 * 3 + 2] = 0.7;  // row 1, column 2
  const auto d = image_measure(dot, 1.0);
  CHECK(d.weights()[1 + 2 * 3] == 1.0);  // column-major

  CHECK(code_of([] { image_measure(io::GrayscaleImage{3, 3, std::vector<double>(9, 0.0)}, 1.0); }) ==
        ErrorCode::ZeroMassImage);
  CHECK(code_of([] { image_measure(io::GrayscaleImage{3, 2, std::vector<double>(6, 1.0)}, 1.0); }) ==
        ErrorCode::NotSquareGrid);
}

TEST_CASE("image transforms") {
  const auto img = synthetic_digit(12);
  CHECK(mirror_horizontal(mirror_horizontal(img)).pixels == img.pixels);
  CHECK(rotate90(img, 4).pixels == img.pixels);
  CHECK(rotate90(rotate90(img, 1), 3).pixels == img.pixels);
  const auto s = subsample(img, 6);
  CHECK(s.width == 6);
  CHECK(subsample(img, 12).pixels == img.pixels);
}

TEST_CASE("digit reflection: fast and naive agree") {
  BenchOptions o;
  o.task = BenchTask::digits;
  o.transform = "reflection";
  o.sizes = {28};
  o.warmup = false;
  o.solver.theta = 0.1;
  o.solver.epsilon = default_epsilon(BenchTask::digits);
  const auto rep = run_benchmark(o);
  REQUIRE(rep.records.size() == 1);
  CHECK(*rep.records[0].plan_diff_fro <= 1e-12);
}

TEST_CASE("slope fitting") {
  const std::vector<double> n{100, 200, 400, 800};
  std::vector<double> t;
  for (double x : n) t.push_back(3e-9 * x * x);
  CHECK(fit_loglog_slope(n, t) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(code_of([] { fit_loglog_slope(std::vector<double>{1}, std::vector<double>{1}); }) ==
        ErrorCode::ConfigInvalid);
}

TEST_CASE("benchmark report formats") {
  BenchOptions o;
  o.sizes = {20, 30, 40};
  o.warmup = false;
  o.solver.epsilon = 0.01;
  o.solver.outer_iterations = 2;
  const auto rep = run_benchmark(o);
  REQUIRE(rep.records.size() == 3);
  CHECK(rep.slope_fast.has_value());
  CHECK(rep.slope_naive.has_value());
  const std::string csv = bench_report_csv(rep);
  CHECK(csv.rfind("N,time_fast_s,time_naive_s,speedup,plan_diff_fro\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(bench_report_json(rep, o).find("\"slope_fast\"") != std::string::npos);
  CHECK(bench_report_table(rep).find("fitted slope") != std::string::npos);
}

TEST_CASE("naive guard") {
  BenchOptions o;
  o.task = BenchTask::random2d;
  o.sizes = {91};  // 8281 points, above the dense limit
  o.run_fast = false;
  CHECK(code_of([&] { run_benchmark(o); }) == ErrorCode::NaiveTooLarge);
}

TEST_CASE("task names") {
  for (auto t : {BenchTask::random1d, BenchTask::random2d, BenchTask::timeseries, BenchTask::digits,
                 BenchTask::horse})
    CHECK(parse_task(task_name(t)) == t);
  CHECK_FALSE(parse_task("mnist").has_value());
}
