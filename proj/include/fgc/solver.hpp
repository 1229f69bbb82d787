#pragma once

#include <vector>

#include "fgc/gradient.hpp"
#include "fgc/sinkhorn.hpp"
#include "fgc/types.hpp"

namespace fgc {

struct IterationRecord {
  /// E (or the FGW objective) of the plan produced by this iteration.
  double objective = 0.0;
  double entropic_objective = 0.0;
  double marginal_violation = 0.0;
  int sinkhorn_iterations = 0;
  double gradient_seconds = 0.0;
  double sinkhorn_seconds = 0.0;
};

struct MirrorDescentTrace {
  double setup_seconds = 0.0;
  std::vector<IterationRecord> records;
};

/// Mirror descent with a KL proximal term: each step solves an entropic OT
/// problem with cost grad(P_l) + (eps - tau) ln P_l at regularization tau,
/// starting from P_0 = u v^T. Sinkhorn duals are carried between steps.
SolveResult entropic_gw(const DiscreteMeasure& u, const DiscreteMeasure& v,
                        const SolverConfig& config, MirrorDescentTrace* trace = nullptr);

SolveResult entropic_fgw(const DiscreteMeasure& u, const DiscreteMeasure& v,
                         const FeatureCost& cost, const SolverConfig& config,
                         MirrorDescentTrace* trace = nullptr);

/// Shared outer loop; `ws` decides GW vs FGW and the gradient path.
SolveResult mirror_descent(const DiscreteMeasure& u, const DiscreteMeasure& v,
                           const GradientWorkspace& ws, const SolverConfig& config,
                           MirrorDescentTrace* trace = nullptr);

}  // namespace fgc
