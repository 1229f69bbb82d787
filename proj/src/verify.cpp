#include "fgc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "fgc/experiments.hpp"
#include "fgc/fast_multiply.hpp"
#include "fgc/gradient.hpp"
#include "fgc/oracles.hpp"
#include "fgc/sinkhorn.hpp"
#include "fgc/solver.hpp"

namespace fgc {
namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

/// A random plan and the measures it couples, so the gradient identities hold.
struct CoupledPlan {
  Matrix plan;
  DiscreteMeasure u;
  DiscreteMeasure v;
};

CoupledPlan random_coupled_plan(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 1.0);
  Matrix p(m, n);
  double total = 0.0;
  for (double& x : p.values()) total += (x = d(rng));
  for (double& x : p.values()) x /= total;
  auto u = validate_measure(row_sums(p), UniformGrid1D(m, 1.0 / double(m - 1), 2));
  auto v = validate_measure(col_sums(p), UniformGrid1D(n, 1.0 / double(n - 1), 2));
  return {std::move(p), std::move(u), std::move(v)};
}

struct FaultGuard {
  explicit FaultGuard(bool on) : active(on) {
    if (active) testing::inject_binomial_fault(true);
  }
  ~FaultGuard() {
    if (active) testing::inject_binomial_fault(false);
  }
  bool active;
};

CheckResult make_check(std::string name, double measured, double threshold, std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

CheckResult multiply_1d(const VerifyOptions& o, std::mt19937_64& rng) {
  double worst = 0.0;
  std::string where;
  std::vector<std::size_t> sizes{16, 64};
  if (o.n > 64) sizes.push_back(o.n);
  for (std::size_t n : sizes)
    for (int k = 1; k <= o.k; ++k) {
      const UniformGrid1D g(n, 1.0 / double(n - 1), k);
      const Matrix dense = oracle::distance_matrix(g);
      const Matrix lower = oracle::lower_matrix(n, k);
      for (int t = 0; t < o.trials; ++t) {
        const auto x = random_vector(n, rng);
        const double e1 = oracle::relative_error(apply_distance_1d(x, g), oracle::matvec(dense, x));
        const double e2 = oracle::relative_error(apply_lower(x, k), oracle::matvec(lower, x));
        if (std::max(e1, e2) > worst) {
          worst = std::max(e1, e2);
          where = "N=" + std::to_string(n) + " k=" + std::to_string(k);
        }
      }
    }
  return make_check("multiply-oracle-1d", worst, 1e-12, where);
}

CheckResult multiply_2d(const VerifyOptions& o, std::mt19937_64& rng) {
  double worst = 0.0;
  std::string where;
  std::vector<std::size_t> sides{4, 8};
  if (o.side > 8) sides.push_back(o.side);
  for (std::size_t s : sides)
    for (int k = 1; k <= o.k; ++k) {
      const UniformGrid2D g(s, 1.0 / double(s - 1), k);
      const Matrix dense = oracle::distance_matrix(g);
      for (int t = 0; t < std::max(1, o.trials / 2); ++t) {
        const auto x = random_vector(s * s, rng);
        const double e = oracle::relative_error(apply_distance_2d(x, g), oracle::matvec(dense, x));
        if (e > worst) {
          worst = e;
          where = "n=" + std::to_string(s) + " k=" + std::to_string(k);
        }
      }
    }
  return make_check("multiply-oracle-2d", worst, 1e-11, where);
}

CheckResult reversal_identity(const VerifyOptions& o, std::mt19937_64& rng) {
  std::size_t mismatches = 0;
  for (int k = 1; k <= o.k; ++k) {
    auto x = random_vector(o.n, rng);
    const auto up = apply_upper(x, k);
    std::reverse(x.begin(), x.end());
    auto low = apply_lower(x, k);
    std::reverse(low.begin(), low.end());
    for (std::size_t i = 0; i < up.size(); ++i) mismatches += up[i] != low[i];
  }
  return make_check("reversal-identity", double(mismatches), 0.0, "entries differing bitwise");
}

CheckResult operation_count(const VerifyOptions& o, std::mt19937_64& rng) {
  double off = 0.0;
  const auto x = random_vector(o.n, rng);
  for (int k = 1; k <= o.k; ++k) {
    const auto c = count_lower_operations(x, k);
    const std::uint64_t steps = o.n - 1, kk = std::uint64_t(k);
    const std::uint64_t mults = steps * kk * (kk + 1) / 2;
    const std::uint64_t adds = steps * (kk + 1) * (kk + 2) / 2;
    off += std::abs(double(c.multiplications) - double(mults)) +
           std::abs(double(c.additions) - double(adds));
  }
  return make_check("operation-count", off, 0.0, "distance from the closed-form counts");
}

std::vector<CheckResult> triple_product_checks(const VerifyOptions& o, std::mt19937_64& rng) {
  const std::size_t m = std::min<std::size_t>(o.n, 96), n = std::min<std::size_t>(o.n, 80);
  double worst = 0.0;
  std::size_t mismatches = 0;
  const std::size_t s = std::min<std::size_t>(o.side, 9);
  for (int k = 1; k <= o.k; ++k) {
    const std::vector<std::pair<Grid, Grid>> cases{
        {UniformGrid1D(m, 1.0 / double(m - 1), k), UniformGrid1D(n, 0.5 / double(n - 1), k)},
        {UniformGrid2D(s, 1.0 / double(s - 1), k), UniformGrid1D(n, 1.0 / double(n - 1), k)},
        {UniformGrid1D(m, 1.0 / double(m - 1), k), UniformGrid2D(s, 1.0 / double(s - 1), k)}};
    for (const auto& [gx, gy] : cases) {
      const std::size_t rows = point_count(gx), cols = point_count(gy);
      Matrix p(rows, cols);
      for (double& x : p.values()) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const Matrix want = oracle::matmul(oracle::matmul(oracle::distance_matrix(gx), p),
                                         oracle::distance_matrix(gy));
      const Matrix fast = triple_product(p, gx, gy, Execution::parallel);
      worst = std::max(worst, oracle::relative_error(fast.values(), want.values()));
      const Matrix ref = reference::triple_product(p, gx, gy);
      const Matrix ser = triple_product(p, gx, gy, Execution::serial);
      for (std::size_t t = 0; t < fast.values().size(); ++t)
        mismatches += (fast.values()[t] != ref.values()[t]) + (ser.values()[t] != ref.values()[t]);
    }
  }
  return {make_check("triple-product-oracle", worst, 1e-12),
          make_check("triple-product-reference", double(mismatches), 0.0,
                     "entries differing bitwise from the serial reference")};
}

std::vector<CheckResult> gradient_checks(std::mt19937_64& rng) {
  const std::size_t m = 8, n = 8;
  double brute = 0.0, fd = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    auto cp = random_coupled_plan(m, n, rng);
    const Matrix dx = oracle::distance_matrix(cp.u.grid());
    const Matrix dy = oracle::distance_matrix(cp.v.grid());
    FeatureCost cost{Matrix(m, n)};
    for (double& x : cost.values.values()) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);

    const auto gws = make_gw_workspace(cp.u, cp.v);
    const auto fws = make_fgw_workspace(cp.u, cp.v, cost, 0.5);
    const Matrix g = gradient(cp.plan, gws);
    const Matrix gf = gradient(cp.plan, fws);
    brute = std::max(brute, oracle::relative_error(g.values(), oracle::gw_gradient(cp.plan, dx, dy).values()));
    brute = std::max(brute, oracle::relative_error(
                                gf.values(), oracle::fgw_gradient(cp.plan, dx, dy, cost.values, 0.5).values()));
    brute = std::max(brute, std::abs(gw_objective(cp.plan, gws) - oracle::gw_objective(cp.plan, dx, dy)) /
                                oracle::gw_objective(cp.plan, dx, dy));

    const auto fd_gw = oracle::finite_difference_gradient(
        [&](const Matrix& p) { return oracle::gw_objective(p, dx, dy); }, cp.plan, 1e-6);
    const auto fd_fgw = oracle::finite_difference_gradient(
        [&](const Matrix& p) { return oracle::fgw_objective(p, dx, dy, cost.values, 0.5); }, cp.plan,
        1e-6);
    for (std::size_t t = 0; t < g.values().size(); ++t) {
      fd = std::max(fd, std::abs(fd_gw.values()[t] - g.values()[t]) / std::abs(g.values()[t]));
      fd = std::max(fd, std::abs(fd_fgw.values()[t] - gf.values()[t]) / std::abs(gf.values()[t]));
    }
  }
  return {make_check("gradient-brute-force", brute, 1e-11),
          make_check("gradient-finite-difference", fd, 1e-5, "max relative error per entry")};
}

std::vector<CheckResult> sinkhorn_checks(const VerifyOptions& o, std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  {
    const std::size_t n = 50;
    auto u = gen_random_measure_1d(n, rng()), v = gen_random_measure_1d(n + 7, rng());
    const auto r = sinkhorn(Matrix(n, n + 7), u, v, SinkhornOptions{});
    const Matrix want = outer(u.weights(), v.weights());
    out.push_back(make_check("sinkhorn-zero-cost", frobenius_diff(r.plan.values, want), 1e-10));
  }
  {
    auto half = validate_measure({0.5, 0.5}, UniformGrid1D(2, 1.0, 1));
    Matrix c(2, 2);
    c(0, 1) = c(1, 0) = 1.0;
    SinkhornOptions so;
    so.epsilon = 1.0;
    so.tolerance = 1e-14;
    const auto r = sinkhorn(c, half, half, so);
    const double sigma = 1.0 / (1.0 + std::exp(-1.0));
    Matrix want(2, 2);
    want(0, 0) = want(1, 1) = sigma / 2;
    want(0, 1) = want(1, 0) = (1 - sigma) / 2;
    out.push_back(make_check("sinkhorn-closed-form", frobenius_diff(r.plan.values, want), 1e-10));
  }
  {
    double worst = 0.0;
    const std::size_t n = std::min<std::size_t>(o.n, 300);
    for (double eps : {0.1, 0.01, 0.002}) {
      auto u = gen_random_measure_1d(n, rng()), v = gen_random_measure_1d(n, rng());
      Matrix c(n, n);
      for (double& x : c.values()) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      SinkhornOptions so;
      so.epsilon = eps;
      const auto r = sinkhorn(c, u, v, so);
      if (r.converged) worst = std::max(worst, r.marginal_violation);
    }
    out.push_back(make_check("sinkhorn-marginals", worst, 1e-9));
  }
  return out;
}

std::vector<CheckResult> solver_checks(const VerifyOptions& o) {
  std::vector<CheckResult> out;
  const std::size_t n = 100;
  SolverConfig cfg;
  {
    auto u = gen_random_measure_1d(n, o.seed), v = gen_random_measure_1d(n, o.seed + 1);
    auto w = u.weights();
    std::reverse(w.begin(), w.end());
    auto ur = validate_measure(w, u.grid());
    const auto a = entropic_gw(u, v, cfg).plan.values;
    const auto b = entropic_gw(ur, v, cfg).plan.values;
    Matrix flipped(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < n; ++p) flipped(n - 1 - i, p) = a(i, p);
    out.push_back(make_check("reversal-equivariance", frobenius_diff(flipped, b), 1e-10));
  }
  {
    const std::size_t m = std::min<std::size_t>(o.n, 200);
    auto u = gen_random_measure_1d(m, o.seed + 2), v = gen_random_measure_1d(m, o.seed + 3);
    const auto cost = coordinate_cost(u.grid(), v.grid());
    double worst = 0.0;
    for (bool fused : {false, true}) {
      SolverConfig fc = cfg, nc = cfg;
      nc.mode = GradientMode::naive;
      const auto a = fused ? entropic_fgw(u, v, cost, fc) : entropic_gw(u, v, fc);
      const auto b = fused ? entropic_fgw(u, v, cost, nc) : entropic_gw(u, v, nc);
      worst = std::max(worst, plan_discrepancy(a.plan.values, b.plan.values));
    }
    out.push_back(make_check("mode-equivalence", worst, 1e-12, "fast vs naive plans, GW and FGW"));
  }
  {
    auto u = gen_random_measure_1d(n, o.seed + 4), v = gen_random_measure_1d(n, o.seed + 5);
    const auto cost = coordinate_cost(u.grid(), v.grid());
    SolverConfig one = cfg;
    one.theta = 1.0;
    const auto gw = entropic_gw(u, v, cfg).plan.values;
    const auto fgw = entropic_fgw(u, v, cost, one).plan.values;
    std::size_t bitwise = 0;
    for (std::size_t t = 0; t < gw.values().size(); ++t) bitwise += gw.values()[t] != fgw.values()[t];

    SolverConfig zero = cfg;
    zero.theta = 0.0;
    const auto f0 = entropic_fgw(u, v, cost, zero).plan.values;
    Matrix c2 = cost.values;
    for (double& x : c2.values()) x *= x;
    SinkhornOptions so;
    so.epsilon = cfg.epsilon;
    const auto ot = sinkhorn(c2, u, v, so).plan.values;
    out.push_back(make_check("fgw-theta-one", double(bitwise), 0.0, "entries differing from GW bitwise"));
    out.push_back(make_check("fgw-theta-zero", frobenius_diff(f0, ot), 1e-12));
  }
  return out;
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> VerifyReport::failed() const {
  std::vector<std::string> names;
  for (const auto& c : checks)
    if (!c.passed) names.push_back(c.name);
  return names;
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  FaultGuard fault(options.inject_fault);
  auto add = [&](CheckResult c) { report.checks.push_back(std::move(c)); };
  auto add_all = [&](std::vector<CheckResult> cs) {
    for (auto& c : cs) add(std::move(c));
  };
  add(multiply_1d(options, rng));
  add(multiply_2d(options, rng));
  add(reversal_identity(options, rng));
  add(operation_count(options, rng));
  add_all(triple_product_checks(options, rng));
  add_all(gradient_checks(rng));
  add_all(sinkhorn_checks(options, rng));
  add_all(solver_checks(options));
  return report;
}

std::string format_ledger(const VerifyReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g <= %.3g", c.measured, c.threshold);
    os << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << buf;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
  return os.str();
}

}  // namespace fgc
