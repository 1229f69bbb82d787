#include "fgc/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fgc/error.hpp"

namespace fgc {

UniformGrid1D::UniformGrid1D(std::size_t size_, double spacing_, int power_)
    : size(size_), spacing(spacing_), power(power_) {
  if (size == 0) throw Error(ErrorCode::ConfigInvalid, "1D grid needs at least one point");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::ConfigInvalid, "grid spacing must be positive");
  if (power < 1) throw Error(ErrorCode::ConfigInvalid, "distance power must be >= 1");
}

UniformGrid2D::UniformGrid2D(std::size_t side_, double spacing_, int power_)
    : side(side_), spacing(spacing_), power(power_) {
  if (side == 0) throw Error(ErrorCode::ConfigInvalid, "2D grid needs at least one point");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::ConfigInvalid, "grid spacing must be positive");
  if (power < 1) throw Error(ErrorCode::ConfigInvalid, "distance power must be >= 1");
}

UniformGrid2D UniformGrid2D::from_points(std::size_t points, double spacing, int power) {
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(points))));
  if (side * side != points)
    throw Error(ErrorCode::NotSquareGrid, std::to_string(points) + " is not a perfect square");
  return UniformGrid2D(side, spacing, power);
}

std::size_t point_count(const Grid& g) {
  return std::visit([](const auto& grid) { return grid.points(); }, g);
}

int grid_power(const Grid& g) {
  return std::visit([](const auto& grid) { return grid.power; }, g);
}

double grid_spacing(const Grid& g) {
  return std::visit([](const auto& grid) { return grid.spacing; }, g);
}

DiscreteMeasure validate_measure(std::vector<double> weights, Grid grid) {
  const std::size_t n = point_count(grid);
  if (weights.size() != n)
    throw Error(ErrorCode::WrongLength, "measure has " + std::to_string(weights.size()) +
                                            " weights for a grid of " + std::to_string(n) +
                                            " points");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::NegativeWeight, "weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormalizationBand)
    throw Error(ErrorCode::NotNormalized, "weights sum to " + std::to_string(total));
  // Rounding-level sums are left alone so that validation is idempotent.
  if (std::abs(total - 1.0) > 1e-14)
    for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(weights), std::move(grid));
}

DiscreteMeasure validate_measure(const DiscreteMeasure& m) {
  return validate_measure(m.weights(), m.grid());
}

double TransportPlan::marginal_violation() const {
  double worst = 0.0;
  const auto r = row_sums(values);
  const auto c = col_sums(values);
  for (std::size_t i = 0; i < r.size() && i < row_marginal.size(); ++i)
    worst = std::max(worst, std::abs(r[i] - row_marginal[i]));
  for (std::size_t j = 0; j < c.size() && j < col_marginal.size(); ++j)
    worst = std::max(worst, std::abs(c[j] - col_marginal[j]));
  return worst;
}

TransportPlan independent_plan(const DiscreteMeasure& u, const DiscreteMeasure& v) {
  return TransportPlan{outer(u.weights(), v.weights()), u.weights(), v.weights()};
}

double entropy(const Matrix& plan) {
  double h = 0.0;
  for (double p : plan.values()) {
    if (p < 0.0) throw Error(ErrorCode::NegativeEntry, "plan entry is negative");
    if (p > 0.0) h += p * (std::log(p) - 1.0);
  }
  return h;
}

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorCode::ConfigInvalid, "epsilon must be positive");
  if (!(effective_tau() > 0.0) || !std::isfinite(effective_tau()))
    throw Error(ErrorCode::ConfigInvalid, "tau must be positive");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in [0, 1]");
  if (outer_iterations < 1) throw Error(ErrorCode::ConfigInvalid, "outer iterations must be >= 1");
  if (sinkhorn_max_iterations < 1)
    throw Error(ErrorCode::ConfigInvalid, "sinkhorn iterations must be >= 1");
  if (!(sinkhorn_tolerance > 0.0)) throw Error(ErrorCode::ConfigInvalid, "tolerance must be positive");
  if (objective_tolerance && !(*objective_tolerance > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "objective tolerance must be positive");
}

}  // namespace fgc
