#pragma once

#include <vector>

#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc {

/// Dual variables in log form: plan[i][p] = exp(log_u[i] - cost[i][p] / eps + log_v[p]).
/// Passing the state of a previous solve warm-starts the next one.
struct SinkhornState {
  std::vector<double> log_u;
  std::vector<double> log_v;
};

struct SinkhornOptions {
  double epsilon = 0.002;
  int max_iterations = 10000;
  double tolerance = 1e-9;
  bool log_domain = true;
};

struct SinkhornResult {
  TransportPlan plan;
  int iterations = 0;
  double marginal_violation = 0.0;
  bool converged = false;
};

/// Entropic OT: argmin <cost, P> + eps H(P) over couplings of u and v.
///
/// With log_domain the scaling vectors are periodically absorbed into the
/// log potentials (and the kernel rebuilt), so exp(-cost/eps) never has to
/// be representable as a whole. Without it, plain Sinkhorn-Knopp scaling
/// is used and underflow raises NumericalOverflow.
///
/// Stops once max(|P 1 - u|_inf, |P^T 1 - v|_inf) <= tolerance or after
/// max_iterations sweeps; the latter is reported through `converged`.
SinkhornResult sinkhorn(const Matrix& cost, const DiscreteMeasure& u, const DiscreteMeasure& v,
                        const SinkhornOptions& options, SinkhornState* state = nullptr);

}  // namespace fgc
