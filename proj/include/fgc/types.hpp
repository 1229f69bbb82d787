#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fgc/matrix.hpp"

namespace fgc {

/// Uniform 1D grid with `size` points spaced `spacing` apart. The implied
/// distance between points i and j is spacing^power * |i - j|^power.
struct UniformGrid1D {
  std::size_t size = 1;
  double spacing = 1.0;
  int power = 1;

  UniformGrid1D() = default;
  UniformGrid1D(std::size_t size, double spacing, int power);

  std::size_t points() const noexcept { return size; }
  friend bool operator==(const UniformGrid1D&, const UniformGrid1D&) = default;
};

/// Square side x side grid flattened column-major: point (i, j) has index
/// i + j * side. Distances are powers of the scaled Manhattan distance.
struct UniformGrid2D {
  std::size_t side = 1;
  double spacing = 1.0;
  int power = 1;

  UniformGrid2D() = default;
  UniformGrid2D(std::size_t side, double spacing, int power);

  /// Builds a grid from a flat point count; throws NotSquareGrid if
  /// `points` is not a perfect square.
  static UniformGrid2D from_points(std::size_t points, double spacing, int power);

  std::size_t points() const noexcept { return side * side; }
  friend bool operator==(const UniformGrid2D&, const UniformGrid2D&) = default;
};

using Grid = std::variant<UniformGrid1D, UniformGrid2D>;

std::size_t point_count(const Grid& g);
int grid_power(const Grid& g);
double grid_spacing(const Grid& g);

/// Probability weights on a grid. Only obtainable through validate_measure,
/// so a constructed instance always satisfies the invariants.
class DiscreteMeasure {
 public:
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return weights_.size(); }

  friend DiscreteMeasure validate_measure(std::vector<double> weights, Grid grid);
  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  DiscreteMeasure(std::vector<double> w, Grid g) : weights_(std::move(w)), grid_(std::move(g)) {}
  std::vector<double> weights_;
  Grid grid_;
};

inline constexpr double kNormalizationBand = 1e-9;

/// Checks length, sign, and total mass. Sums within kNormalizationBand of 1
/// are renormalized; anything further is rejected.
DiscreteMeasure validate_measure(std::vector<double> weights, Grid grid);
DiscreteMeasure validate_measure(const DiscreteMeasure& m);

struct TransportPlan {
  Matrix values;
  std::vector<double> row_marginal;
  std::vector<double> col_marginal;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }

  /// max(|row sums - row_marginal|_inf, |col sums - col_marginal|_inf)
  double marginal_violation() const;
};

TransportPlan independent_plan(const DiscreteMeasure& u, const DiscreteMeasure& v);

struct FeatureCost {
  Matrix values;
};

/// H(P) = sum p (ln p - 1), with 0 ln 0 taken as 0.
double entropy(const Matrix& plan);
inline double entropy(const TransportPlan& plan) { return entropy(plan.values); }

enum class GradientMode { fast, naive };
enum class Execution { serial, parallel };

struct SolverConfig {
  double epsilon = 0.002;
  std::optional<double> tau;  // defaults to epsilon
  double theta = 0.5;
  int outer_iterations = 10;
  int sinkhorn_max_iterations = 10000;
  double sinkhorn_tolerance = 1e-9;
  bool log_domain = true;
  /// When set, the outer loop stops early once |E_l - E_{l-1}| falls below it.
  std::optional<double> objective_tolerance;
  GradientMode mode = GradientMode::fast;
  Execution execution = Execution::serial;

  double effective_tau() const noexcept { return tau.value_or(epsilon); }
  void validate() const;
};

struct SolveResult {
  TransportPlan plan;
  double gw_objective = 0.0;
  double entropic_objective = 0.0;
  int iterations_used = 0;
  double marginal_violation = 0.0;
  bool converged = true;
};

}  // namespace fgc
