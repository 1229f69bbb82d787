#include "fgc/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fgc/error.hpp"
#include "fgc/log.hpp"

namespace fgc {
namespace {

constexpr double kAbsorbAbove = 1e50;
constexpr double kAbsorbBelow = 1e-50;
constexpr int kMaxRecoveries = 100;

// Four interleaved partial sums; fixed order, so results are reproducible.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    s0 += a[t] * b[t];
    s1 += a[t + 1] * b[t + 1];
    s2 += a[t + 2] * b[t + 2];
    s3 += a[t + 3] * b[t + 3];
  }
  for (; t < n; ++t) s0 += a[t] * b[t];
  return (s0 + s1) + (s2 + s3);
}

void normalize_rows(const Matrix& cost, double eps, const std::vector<double>& log_v,
                    std::vector<double>& log_u);
void normalize_cols(const Matrix& cost, double eps, const std::vector<double>& log_u,
                    std::vector<double>& log_v);

class Scaling {
 public:
  Scaling(const Matrix& cost, double eps, std::vector<double>& log_u, std::vector<double>& log_v)
      : cost_(cost), inv_eps_(1.0 / eps), log_u_(log_u), log_v_(log_v),
        kernel_(cost.rows(), cost.cols()), a_(cost.rows(), 1.0), b_(cost.cols(), 1.0),
        kta_(cost.cols()) {}

  void rebuild_kernel() {
    const std::size_t m = cost_.rows(), n = cost_.cols();
    for (std::size_t i = 0; i < m; ++i) {
      const double* c = cost_.row(i).data();
      double* k = kernel_.row(i).data();
      for (std::size_t p = 0; p < n; ++p) k[p] = std::exp(log_u_[i] + log_v_[p] - c[p] * inv_eps_);
    }
    std::fill(a_.begin(), a_.end(), 1.0);
    std::fill(b_.begin(), b_.end(), 1.0);
  }

  void absorb() {
    for (std::size_t i = 0; i < a_.size(); ++i) log_u_[i] += std::log(a_[i]);
    for (std::size_t p = 0; p < b_.size(); ++p) log_v_[p] += std::log(b_[p]);
    rebuild_kernel();
  }

  /// One fused pass over the kernel: measures the row-marginal violation of
  /// the current iterate, then sets a = u / (K b) and b = v / (K^T a).
  /// Returns the violation measured before the update.
  double sweep(const std::vector<double>& u, const std::vector<double>& v) {
    const std::size_t m = kernel_.rows(), n = kernel_.cols();
    double worst = 0.0;
    prev_a_ = a_;
    std::fill(kta_.begin(), kta_.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* k = kernel_.row(i).data();
      const double kb = dot(k, b_.data(), n);
      worst = std::max(worst, std::abs(a_[i] * kb - u[i]));
      const double ai = u[i] / kb;
      a_[i] = ai;
      for (std::size_t p = 0; p < n; ++p) kta_[p] += ai * k[p];
    }
    prev_b_ = b_;
    for (std::size_t p = 0; p < n; ++p) b_[p] = v[p] / kta_[p];
    return worst;
  }

  /// Undoes the last sweep (used when its measured violation already passed).
  void rollback() {
    a_.swap(prev_a_);
    b_.swap(prev_b_);
  }

  /// Violation of the current iterate without updating it.
  double violation(const std::vector<double>& u) const {
    const std::size_t m = kernel_.rows(), n = kernel_.cols();
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      worst = std::max(worst, std::abs(a_[i] * dot(kernel_.row(i).data(), b_.data(), n) - u[i]));
    return worst;
  }

  /// Drops the last sweep and folds the previous (finite) scalings into the potentials.
  void recover() {
    rollback();
    finalize_potentials();
    std::fill(a_.begin(), a_.end(), 1.0);
    std::fill(b_.begin(), b_.end(), 1.0);
  }

  bool needs_absorb() const {
    auto out = [](double x) { return x > kAbsorbAbove || x < kAbsorbBelow; };
    return std::any_of(a_.begin(), a_.end(), out) || std::any_of(b_.begin(), b_.end(), out);
  }

  bool all_finite_positive() const {
    auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    return std::all_of(a_.begin(), a_.end(), ok) && std::all_of(b_.begin(), b_.end(), ok);
  }

  Matrix plan() const {
    Matrix p(kernel_.rows(), kernel_.cols());
    for (std::size_t i = 0; i < p.rows(); ++i) {
      const double* k = kernel_.row(i).data();
      double* out = p.row(i).data();
      for (std::size_t q = 0; q < p.cols(); ++q) out[q] = a_[i] * k[q] * b_[q];
    }
    return p;
  }

  /// Folds the scalings into the log potentials without rebuilding.
  void finalize_potentials() {
    for (std::size_t i = 0; i < a_.size(); ++i) log_u_[i] += std::log(a_[i]);
    for (std::size_t p = 0; p < b_.size(); ++p) log_v_[p] += std::log(b_[p]);
  }

 private:
  const Matrix& cost_;
  double inv_eps_;
  std::vector<double>& log_u_;
  std::vector<double>& log_v_;
  Matrix kernel_;
  std::vector<double> a_, b_, prev_a_, prev_b_, kta_;
};

/// log_u[i] = min_p (cost[i][p] / eps - log_v[p]): every kernel row then peaks at exactly 1.
void normalize_rows(const Matrix& cost, double eps, const std::vector<double>& log_v,
                    std::vector<double>& log_u) {
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    auto row = cost.row(i);
    for (std::size_t p = 0; p < row.size(); ++p) best = std::min(best, row[p] / eps - log_v[p]);
    log_u[i] = best;
  }
}

void normalize_cols(const Matrix& cost, double eps, const std::vector<double>& log_u,
                    std::vector<double>& log_v) {
  std::fill(log_v.begin(), log_v.end(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    auto row = cost.row(i);
    for (std::size_t p = 0; p < row.size(); ++p)
      log_v[p] = std::min(log_v[p], row[p] / eps - log_u[i]);
  }
}

SinkhornResult solve_on_support(const Matrix& cost, const std::vector<double>& uw,
                                const std::vector<double>& vw, const SinkhornOptions& options,
                                SinkhornState& st) {
  const double eps = options.epsilon;
  const std::size_t m = cost.rows(), n = cost.cols();
  const bool warm = st.log_u.size() == m && st.log_v.size() == n;
  if (!options.log_domain) {
    st.log_u.assign(m, 0.0);
    st.log_v.assign(n, 0.0);
  } else if (warm) {
    normalize_rows(cost, eps, st.log_v, st.log_u);
  } else {
    st.log_u.assign(m, 0.0);
    st.log_v.assign(n, 0.0);
    normalize_rows(cost, eps, st.log_v, st.log_u);
    normalize_cols(cost, eps, st.log_u, st.log_v);
  }

  Scaling sc(cost, eps, st.log_u, st.log_v);
  sc.rebuild_kernel();

  bool converged = false;
  int recoveries = 0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double measured = sc.sweep(uw, vw);
    if (it > 0 && measured <= options.tolerance) {
      sc.rollback();
      converged = true;
      break;
    }
    if (!sc.all_finite_positive()) {
      if (!options.log_domain)
        throw Error(ErrorCode::NumericalOverflow,
                    "scaling underflowed; enable log-domain stabilization or raise epsilon");
      // A kernel row or column underflowed entirely. Keep the last finite
      // iterate and re-center both potentials so every row and column of the
      // rebuilt kernel has an entry of order one.
      if (++recoveries > kMaxRecoveries)
        throw Error(ErrorCode::NumericalOverflow, "scaling failed even with stabilization");
      sc.recover();
      normalize_cols(cost, eps, st.log_u, st.log_v);
      normalize_rows(cost, eps, st.log_v, st.log_u);
      sc.rebuild_kernel();
      continue;
    }
    if (options.log_domain && sc.needs_absorb()) sc.absorb();
  }
  // The last sweep has not been checked yet.
  if (!converged) converged = sc.violation(uw) <= options.tolerance;

  SinkhornResult result;
  result.plan = TransportPlan{sc.plan(), uw, vw};
  sc.finalize_potentials();
  result.iterations = it;
  result.converged = converged;
  return result;
}

std::vector<std::size_t> support(const std::vector<double>& w) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) idx.push_back(i);
  return idx;
}

}  // namespace

SinkhornResult sinkhorn(const Matrix& cost, const DiscreteMeasure& u, const DiscreteMeasure& v,
                        const SinkhornOptions& options, SinkhornState* state) {
  if (cost.rows() != u.size() || cost.cols() != v.size())
    throw Error(ErrorCode::DimensionMismatch, "cost matrix does not match the marginals");
  if (!(options.epsilon > 0.0)) throw Error(ErrorCode::ConfigInvalid, "epsilon must be positive");
  if (options.max_iterations < 1)
    throw Error(ErrorCode::ConfigInvalid, "sinkhorn needs at least one iteration");
  for (double c : cost.values())
    if (!std::isfinite(c)) throw Error(ErrorCode::NonFiniteCost, "cost matrix has a non-finite entry");

  SinkhornState local;
  SinkhornState& st = state ? *state : local;
  const auto& uw = u.weights();
  const auto& vw = v.weights();
  const auto rows = support(uw);
  const auto cols = support(vw);

  SinkhornResult result;
  if (rows.size() == uw.size() && cols.size() == vw.size()) {
    result = solve_on_support(cost, uw, vw, options, st);
  } else {
    // Zero-mass points carry no plan entries; solve on the support and embed.
    const std::size_t m = uw.size(), n = vw.size();
    Matrix sub(rows.size(), cols.size());
    std::vector<double> su(rows.size()), sv(cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      su[a] = uw[rows[a]];
      for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = cost(rows[a], cols[b]);
    }
    for (std::size_t b = 0; b < cols.size(); ++b) sv[b] = vw[cols[b]];

    SinkhornState sub_state;
    if (st.log_u.size() == m && st.log_v.size() == n) {
      for (std::size_t a : rows) sub_state.log_u.push_back(st.log_u[a]);
      for (std::size_t b : cols) sub_state.log_v.push_back(st.log_v[b]);
    }
    SinkhornResult r = solve_on_support(sub, su, sv, options, sub_state);

    st.log_u.assign(m, -std::numeric_limits<double>::infinity());
    st.log_v.assign(n, -std::numeric_limits<double>::infinity());
    for (std::size_t a = 0; a < rows.size(); ++a) st.log_u[rows[a]] = sub_state.log_u[a];
    for (std::size_t b = 0; b < cols.size(); ++b) st.log_v[cols[b]] = sub_state.log_v[b];

    Matrix full(m, n);
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) full(rows[a], cols[b]) = r.plan.values(a, b);
    result.plan = TransportPlan{std::move(full), uw, vw};
    result.iterations = r.iterations;
    result.converged = r.converged;
  }

  result.marginal_violation = result.plan.marginal_violation();
  if (!result.converged)
    log::info("sinkhorn hit the iteration cap with violation " +
              std::to_string(result.marginal_violation));
  return result;
}

}  // namespace fgc
