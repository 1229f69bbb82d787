#include "fgc/gradient.hpp"

#include "fgc/error.hpp"
#include "fgc/fast_multiply.hpp"

namespace fgc {
namespace {

Matrix assemble_c1(const std::vector<double>& a, const std::vector<double>& b) {
  Matrix c(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto row = c.row(i);
    for (std::size_t p = 0; p < b.size(); ++p) row[p] = 2.0 * (a[i] + b[p]);
  }
  return c;
}

std::vector<double> dense_squared_apply(const Grid& grid, const std::vector<double>& w) {
  const Matrix d = dense_distance_matrix(grid);
  std::vector<double> out(w.size(), 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d.cols(); ++j) s += d(i, j) * d(i, j) * w[j];
    out[i] = s;
  }
  return out;
}

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in [0, 1]");
}

void check_plan(const Matrix& plan, const GradientWorkspace& ws) {
  if (plan.rows() != ws.gw_constant_term.rows() || plan.cols() != ws.gw_constant_term.cols())
    throw Error(ErrorCode::DimensionMismatch, "plan does not match the gradient workspace");
}

Matrix squared(const FeatureCost& cost) {
  Matrix sq(cost.values.rows(), cost.values.cols());
  auto src = cost.values.values();
  auto dst = sq.values();
  for (std::size_t t = 0; t < src.size(); ++t) dst[t] = src[t] * src[t];
  return sq;
}

Matrix fused_constant(const Matrix& squared_cost, const Matrix& c1, double theta) {
  Matrix c2(c1.rows(), c1.cols());
  auto sq = squared_cost.values();
  auto g = c1.values();
  auto out = c2.values();
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = (1.0 - theta) * sq[t] + theta * g[t];
  return c2;
}

Matrix combine(const Matrix& constant, double scale, const Matrix& product) {
  Matrix g(constant.rows(), constant.cols());
  auto c = constant.values();
  auto t = product.values();
  auto out = g.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c[k] - scale * t[k];
  return g;
}

}  // namespace

Matrix constant_term_gw(const DiscreteMeasure& u, const DiscreteMeasure& v) {
  const auto a = apply_distance(u.weights(), u.grid(), 2 * grid_power(u.grid()));
  const auto b = apply_distance(v.weights(), v.grid(), 2 * grid_power(v.grid()));
  return assemble_c1(a, b);
}

Matrix constant_term_gw_dense(const DiscreteMeasure& u, const DiscreteMeasure& v) {
  return assemble_c1(dense_squared_apply(u.grid(), u.weights()),
                     dense_squared_apply(v.grid(), v.weights()));
}

GradientWorkspace make_gw_workspace(const DiscreteMeasure& u, const DiscreteMeasure& v,
                                    GradientMode mode, Execution exec) {
  GradientWorkspace ws;
  ws.gx = u.grid();
  ws.gy = v.grid();
  ws.mode = mode;
  ws.execution = exec;
  if (mode == GradientMode::naive) {
    ws.dense_x = dense_distance_matrix(ws.gx);
    ws.dense_y = dense_distance_matrix(ws.gy);
    ws.gw_constant_term = constant_term_gw_dense(u, v);
  } else {
    ws.gw_constant_term = constant_term_gw(u, v);
  }
  ws.constant_term = ws.gw_constant_term;
  ws.theta = 1.0;
  ws.theta_scale = 4.0;
  return ws;
}

GradientWorkspace make_fgw_workspace(const DiscreteMeasure& u, const DiscreteMeasure& v,
                                     const FeatureCost& cost, double theta, GradientMode mode,
                                     Execution exec) {
  check_theta(theta);
  if (cost.values.rows() != u.size() || cost.values.cols() != v.size())
    throw Error(ErrorCode::DimensionMismatch, "feature cost does not match the measures");
  GradientWorkspace ws = make_gw_workspace(u, v, mode, exec);
  ws.theta = theta;
  ws.theta_scale = 4.0 * theta;
  ws.squared_feature_cost = squared(cost);
  ws.constant_term = fused_constant(ws.squared_feature_cost, ws.gw_constant_term, theta);
  return ws;
}

Matrix workspace_triple_product(const Matrix& plan, const GradientWorkspace& ws) {
  check_plan(plan, ws);
  if (ws.mode == GradientMode::naive) return naive_triple_product(plan, *ws.dense_x, *ws.dense_y);
  return triple_product(plan, ws.gx, ws.gy, ws.execution);
}

Matrix gradient(const Matrix& plan, const GradientWorkspace& ws) {
  check_plan(plan, ws);
  // theta = 0 makes the gradient plan independent.
  if (ws.theta_scale == 0.0) return ws.constant_term;
  return combine(ws.constant_term, ws.theta_scale, workspace_triple_product(plan, ws));
}

Matrix gw_gradient(const Matrix& plan, const GradientWorkspace& ws) {
  check_plan(plan, ws);
  return combine(ws.gw_constant_term, 4.0, workspace_triple_product(plan, ws));
}

Matrix fgw_gradient(const Matrix& plan, const FeatureCost& cost, double theta,
                    const GradientWorkspace& ws) {
  check_theta(theta);
  check_plan(plan, ws);
  if (!cost.values.same_shape(ws.gw_constant_term))
    throw Error(ErrorCode::DimensionMismatch, "feature cost does not match the workspace");
  const Matrix c2 = fused_constant(squared(cost), ws.gw_constant_term, theta);
  if (theta == 0.0) return c2;
  return combine(c2, 4.0 * theta, workspace_triple_product(plan, ws));
}

double objective_from_gradient(const Matrix& plan, const Matrix& grad,
                               const GradientWorkspace& ws) {
  const double pairing = inner(grad, plan);
  if (ws.squared_feature_cost.empty()) return 0.5 * pairing;
  // <grad, P> = (1 - theta) <C (x) C, P> + 2 theta E(P)
  const double linear = inner(ws.squared_feature_cost, plan);
  return 0.5 * (pairing + (1.0 - ws.theta) * linear);
}

double gw_objective(const Matrix& plan, const GradientWorkspace& ws) {
  return 0.5 * inner(gw_gradient(plan, ws), plan);
}

double fgw_objective(const Matrix& plan, const FeatureCost& cost, double theta,
                     const GradientWorkspace& ws) {
  const Matrix g = fgw_gradient(plan, cost, theta, ws);
  const double linear = inner(squared(cost), plan);
  return 0.5 * (inner(g, plan) + (1.0 - theta) * linear);
}

}  // namespace fgc
