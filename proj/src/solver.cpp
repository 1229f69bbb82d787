#include "fgc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "fgc/error.hpp"

namespace fgc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kLogFloor = 1e-300;

}  // namespace

SolveResult mirror_descent(const DiscreteMeasure& u, const DiscreteMeasure& v,
                           const GradientWorkspace& ws, const SolverConfig& config,
                           MirrorDescentTrace* trace) {
  config.validate();
  const double eps = config.epsilon;
  const double tau = config.effective_tau();
  const SinkhornOptions inner{tau, config.sinkhorn_max_iterations, config.sinkhorn_tolerance,
                              config.log_domain};

  TransportPlan plan = independent_plan(u, v);
  SinkhornState duals;
  std::vector<IterationRecord> records;
  bool all_converged = true;
  int used = 0;
  double previous_objective = 0.0;
  // With no quadratic term and tau = eps every step solves the same OT
  // problem, so the first solve is already the fixed point.
  const bool linear_only = ws.theta_scale == 0.0 && tau == eps;

  for (int l = 0; l < config.outer_iterations; ++l) {
    IterationRecord rec;
    auto t0 = Clock::now();
    Matrix cost = gradient(plan.values, ws);
    if (l > 0) {
      // The gradient at P_l also gives E(P_l), which closes the previous record.
      IterationRecord& prev = records.back();
      prev.objective = objective_from_gradient(plan.values, cost, ws);
      prev.entropic_objective = prev.objective + eps * entropy(plan.values);
      if (config.objective_tolerance && l > 1 &&
          std::abs(prev.objective - previous_objective) < *config.objective_tolerance)
        break;
      previous_objective = prev.objective;
    }
    if (tau != eps) {
      auto c = cost.values();
      auto p = plan.values.values();
      for (std::size_t t = 0; t < c.size(); ++t) c[t] += (eps - tau) * std::log(std::max(p[t], kLogFloor));
    }
    rec.gradient_seconds = seconds_since(t0);

    t0 = Clock::now();
    SinkhornResult sr = sinkhorn(cost, u, v, inner, &duals);
    rec.sinkhorn_seconds = seconds_since(t0);
    rec.sinkhorn_iterations = sr.iterations;
    rec.marginal_violation = sr.marginal_violation;
    all_converged = all_converged && sr.converged;
    plan = std::move(sr.plan);
    records.push_back(rec);
    ++used;
    if (linear_only) break;
  }

  const Matrix final_grad = gradient(plan.values, ws);
  SolveResult result;
  result.gw_objective = objective_from_gradient(plan.values, final_grad, ws);
  result.entropic_objective = result.gw_objective + eps * entropy(plan.values);
  if (!records.empty() && records.size() == static_cast<std::size_t>(used)) {
    records.back().objective = result.gw_objective;
    records.back().entropic_objective = result.entropic_objective;
  }
  result.marginal_violation = plan.marginal_violation();
  result.iterations_used = used;
  result.converged = all_converged;
  result.plan = std::move(plan);
  if (trace) trace->records = std::move(records);
  return result;
}

SolveResult entropic_gw(const DiscreteMeasure& u, const DiscreteMeasure& v,
                        const SolverConfig& config, MirrorDescentTrace* trace) {
  config.validate();
  const auto t0 = Clock::now();
  const GradientWorkspace ws = make_gw_workspace(u, v, config.mode, config.execution);
  const double setup = seconds_since(t0);
  SolveResult r = mirror_descent(u, v, ws, config, trace);
  if (trace) trace->setup_seconds = setup;
  return r;
}

SolveResult entropic_fgw(const DiscreteMeasure& u, const DiscreteMeasure& v,
                         const FeatureCost& cost, const SolverConfig& config,
                         MirrorDescentTrace* trace) {
  config.validate();
  const auto t0 = Clock::now();
  const GradientWorkspace ws =
      make_fgw_workspace(u, v, cost, config.theta, config.mode, config.execution);
  const double setup = seconds_since(t0);
  SolveResult r = mirror_descent(u, v, ws, config, trace);
  if (trace) trace->setup_seconds = setup;
  return r;
}

}  // namespace fgc
