#include <doctest.h>

#include <algorithm>

#include "fgc/experiments.hpp"
#include "fgc/solver.hpp"
#include "helpers.hpp"

using namespace fgc;

TEST_CASE("single point on both sides") {
  const auto one = validate_measure({1.0}, UniformGrid1D(1, 1.0, 1));
  const auto r = entropic_gw(one, one, SolverConfig{});
  CHECK(r.plan.values == Matrix(1, 1, 1.0));
  CHECK(r.gw_objective == 0.0);
}

TEST_CASE("fast and naive modes give the same plan") {
  const auto u = gen_random_measure_1d(120, 1), v = gen_random_measure_1d(90, 2);
  SolverConfig fast, naive;
  naive.mode = GradientMode::naive;
  const auto a = entropic_gw(u, v, fast), b = entropic_gw(u, v, naive);
  CHECK(plan_discrepancy(a.plan.values, b.plan.values) <= 1e-12);
  CHECK(a.gw_objective == doctest::Approx(b.gw_objective).epsilon(1e-12));

  const auto cost = coordinate_cost(u.grid(), v.grid());
  const auto fa = entropic_fgw(u, v, cost, fast), fb = entropic_fgw(u, v, cost, naive);
  CHECK(plan_discrepancy(fa.plan.values, fb.plan.values) <= 1e-12);
}

TEST_CASE("parallel kernels give the same plan bit for bit") {
  const auto u = gen_random_measure_2d(8, 1), v = gen_random_measure_1d(70, 2);
  SolverConfig s, p;
  s.epsilon = p.epsilon = 0.004;
  p.execution = Execution::parallel;
  CHECK(entropic_gw(u, v, s).plan.values == entropic_gw(u, v, p).plan.values);
}

TEST_CASE("FGW endpoints") {
  const auto u = gen_random_measure_1d(60, 3), v = gen_random_measure_1d(60, 4);
  const auto cost = coordinate_cost(u.grid(), v.grid());
  SolverConfig one;
  one.theta = 1.0;
  MirrorDescentTrace tg, tf;
  const auto gw = entropic_gw(u, v, one, &tg);
  const auto fgw = entropic_fgw(u, v, cost, one, &tf);
  CHECK(gw.plan.values == fgw.plan.values);
  CHECK(gw.gw_objective == fgw.gw_objective);
  REQUIRE(tg.records.size() == tf.records.size());
  for (std::size_t l = 0; l < tg.records.size(); ++l)
    CHECK(tg.records[l].objective == tf.records[l].objective);

  SolverConfig zero;
  zero.theta = 0.0;
  Matrix c2 = cost.values;
  for (double& x : c2.values()) x *= x;
  const auto ot = sinkhorn(c2, u, v, SinkhornOptions{});
  const auto f0 = entropic_fgw(u, v, cost, zero);
  CHECK(frobenius_diff(f0.plan.values, ot.plan.values) <= 1e-12);
}

TEST_CASE("theta = 0 with tau != eps still iterates") {
  const auto u = gen_random_measure_1d(30, 5), v = gen_random_measure_1d(30, 6);
  const auto cost = coordinate_cost(u.grid(), v.grid());
  SolverConfig c;
  c.theta = 0.0;
  c.epsilon = 0.01;
  c.tau = 0.02;
  c.outer_iterations = 4;
  const auto r = entropic_fgw(u, v, cost, c);
  CHECK(r.iterations_used == 4);
  CHECK(r.marginal_violation <= 1e-9);
}

TEST_CASE("reversing the source reverses the plan rows") {
  const std::size_t n = 100;
  const auto u = gen_random_measure_1d(n, 7), v = gen_random_measure_1d(n, 8);
  auto w = u.weights();
  std::reverse(w.begin(), w.end());
  const auto ur = validate_measure(w, u.grid());
  const auto a = entropic_gw(u, v, SolverConfig{}).plan.values;
  const auto b = entropic_gw(ur, v, SolverConfig{}).plan.values;
  Matrix flipped(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < n; ++p) flipped(n - 1 - i, p) = a(i, p);
  CHECK(frobenius_diff(flipped, b) <= 1e-10);
}

TEST_CASE("trace and result bookkeeping") {
  const auto u = gen_random_measure_1d(50, 9), v = gen_random_measure_1d(50, 10);
  SolverConfig c;
  c.epsilon = 0.01;
  MirrorDescentTrace t;
  const auto r = entropic_gw(u, v, c, &t);
  CHECK(r.iterations_used == 10);
  CHECK(t.records.size() == 10);
  CHECK(t.records.back().objective == r.gw_objective);
  CHECK(r.entropic_objective == doctest::Approx(r.gw_objective + c.epsilon * entropy(r.plan)));
  CHECK(r.marginal_violation <= 1e-9);
  CHECK(r.converged);
  for (const auto& rec : t.records) CHECK(rec.sinkhorn_iterations >= 1);
}

TEST_CASE("objective tolerance stops early") {
  const auto u = gen_random_measure_1d(40, 11), v = gen_random_measure_1d(40, 12);
  SolverConfig c;
  c.epsilon = 0.01;
  c.outer_iterations = 50;
  c.objective_tolerance = 1e-6;
  const auto r = entropic_gw(u, v, c);
  CHECK(r.iterations_used < 50);
}

TEST_CASE("plan mass is preserved across iterations with a proximal step") {
  const auto u = gen_random_measure_1d(40, 13), v = gen_random_measure_1d(40, 14);
  SolverConfig c;
  c.epsilon = 0.005;
  c.tau = 0.01;
  const auto r = entropic_gw(u, v, c);
  CHECK(r.marginal_violation <= 1e-9);
  double total = 0.0;
  for (double x : r.plan.values.values()) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}
