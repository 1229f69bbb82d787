#pragma once

#include <optional>
#include <vector>

#include "fgc/matrix.hpp"
#include "fgc/types.hpp"

namespace fgc {

/// Plan-independent pieces of the (F)GW gradient, built once per problem:
///   grad = constant_term - theta_scale * D_X P D_Y
/// with theta_scale = 4 for GW and 4 theta for FGW.
struct GradientWorkspace {
  Grid gx;
  Grid gy;
  Matrix constant_term;
  /// C1, kept separately so FGW gradients at other theta can be formed.
  Matrix gw_constant_term;
  double theta_scale = 4.0;
  double theta = 1.0;
  /// C (x) C for FGW, empty for GW.
  Matrix squared_feature_cost;
  GradientMode mode = GradientMode::fast;
  Execution execution = Execution::serial;
  /// Materialized distance matrices, present only in naive mode.
  std::optional<Matrix> dense_x;
  std::optional<Matrix> dense_y;
};

/// C1[i][p] = 2 (((D_X (x) D_X) u)_i + ((D_Y (x) D_Y) v)_p), evaluated with
/// the fast kernel at doubled power.
Matrix constant_term_gw(const DiscreteMeasure& u, const DiscreteMeasure& v);
/// Same quantity from materialized squared distance matrices.
Matrix constant_term_gw_dense(const DiscreteMeasure& u, const DiscreteMeasure& v);

GradientWorkspace make_gw_workspace(const DiscreteMeasure& u, const DiscreteMeasure& v,
                                    GradientMode mode = GradientMode::fast,
                                    Execution exec = Execution::serial);
GradientWorkspace make_fgw_workspace(const DiscreteMeasure& u, const DiscreteMeasure& v,
                                     const FeatureCost& cost, double theta,
                                     GradientMode mode = GradientMode::fast,
                                     Execution exec = Execution::serial);

/// D_X P D_Y through whichever path the workspace selects.
Matrix workspace_triple_product(const Matrix& plan, const GradientWorkspace& ws);

/// Gradient of the workspace's objective (GW or FGW) at `plan`. Only exact
/// for plans whose marginals are the measures the workspace was built from.
Matrix gradient(const Matrix& plan, const GradientWorkspace& ws);

Matrix gw_gradient(const Matrix& plan, const GradientWorkspace& ws);
Matrix fgw_gradient(const Matrix& plan, const FeatureCost& cost, double theta,
                    const GradientWorkspace& ws);

/// E(P) = <grad E(P), P> / 2, or the FGW analogue when the workspace is FGW.
double objective_from_gradient(const Matrix& plan, const Matrix& grad,
                               const GradientWorkspace& ws);
double gw_objective(const Matrix& plan, const GradientWorkspace& ws);
double fgw_objective(const Matrix& plan, const FeatureCost& cost, double theta,
                     const GradientWorkspace& ws);

}  // namespace fgc
