#include "celime/solver.hpp"

#include <cmath>

namespace celime {

namespace {

// Normalized weights: sum to n, all finite and nonnegative, at least one
// positive.  Empty input means unweighted.
Vector normalized_weights(const Vector& raw, Index n) {
  if (raw.size() == 0) return Vector::Ones(n);
  require(raw.size() == n, "sample_weights length must match row count");
  require_finite(raw, "sample_weights");
  require((raw.array() >= 0.0).all(), "sample_weights must be nonnegative");
  const double total = raw.sum();
  require(total > 0.0, "sample_weights must include a positive entry");
  return raw * (static_cast<double>(n) / total);
}

double penalty_value(const Vector& beta, const CostVector& costs,
                     double lambda, double alpha) {
  const auto c = costs.costs.array();
  const auto b = beta.array();
  return (1.0 - alpha) * lambda * (c * b.abs()).sum() +
         alpha * lambda * (c * b.square()).sum();
}

}  // namespace

void SolverConfig::validate(Index n) const {
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(tolerance > 0.0, "tolerance must be positive");
  require(max_sweeps >= 1, "max_sweeps must be >= 1");
  if (sample_weights.size() != 0)
    require(sample_weights.size() == n,
            "sample_weights length must match row count");
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double objective(const Matrix& X, const Vector& y, const Vector& beta,
                 double intercept, const CostVector& costs,
                 const SolverConfig& cfg) {
  const Index n = X.rows();
  const Index p = X.cols();
  require(n >= 1 && p >= 1, "design matrix must be at least 1x1");
  require(y.size() == n, "y length must match row count");
  require(beta.size() == p, "beta length must match column count");
  require(costs.size() == p, "cost vector length must match column count");
  costs.validate();
  require_finite(X, "X");
  require_finite(y, "y");
  require_finite(beta, "beta");
  require(std::isfinite(intercept), "intercept must be finite");
  cfg.validate(n);

  Vector r = y - X * beta;
  r.array() -= intercept;
  double rss;
  if (cfg.sample_weights.size() != 0) {
    require((cfg.sample_weights.array() >= 0.0).all(),
            "sample_weights must be nonnegative");
    rss = (cfg.sample_weights.array() * r.array().square()).sum();
  } else {
    rss = r.squaredNorm();
  }
  return rss + penalty_value(beta, costs, cfg.lambda, cfg.alpha);
}

Coefficients fit(const Matrix& X, const Vector& y, const CostVector& costs,
                 const SolverConfig& cfg) {
  const Index n = X.rows();
  const Index p = X.cols();
  require(n >= 1 && p >= 1, "design matrix must be at least 1x1");
  require(y.size() == n, "y length must match row count");
  require(costs.size() == p, "cost vector length must match column count");
  costs.validate();
  require_finite(X, "X");
  require_finite(y, "y");
  cfg.validate(n);

  const Vector w = normalized_weights(cfg.sample_weights, n);
  const Vector sqrt_w = w.array().sqrt();

  // Weighted centering makes the unpenalized intercept implicit: in
  // centered coordinates its closed-form update is identically zero.
  Vector mu = Vector::Zero(p);
  double y_center = 0.0;
  if (cfg.fit_intercept) {
    mu = X.transpose() * w / static_cast<double>(n);
    y_center = w.dot(y) / static_cast<double>(n);
  }

  // Weighted column dispersion around mu (around 0 when no intercept).
  Vector col_sd(p);
  for (Index j = 0; j < p; ++j) {
    const auto centered = X.col(j).array() - mu[j];
    col_sd[j] =
        std::sqrt((w.array() * centered.square()).sum() / static_cast<double>(n));
  }

  Coefficients out;
  std::vector<bool> dropped(static_cast<std::size_t>(p), false);
  for (Index j = 0; j < p; ++j) {
    if (col_sd[j] <= 1e-12 * std::max(1.0, std::abs(mu[j]))) {
      dropped[static_cast<std::size_t>(j)] = true;
      out.dropped_features.push_back(j);
    }
  }

  Vector scale = Vector::Ones(p);
  if (cfg.standardize) {
    for (Index j = 0; j < p; ++j)
      if (!dropped[static_cast<std::size_t>(j)]) scale[j] = col_sd[j];
  }

  // B = sqrt(W) * (X - mu) * diag(1/scale), yt = sqrt(W) * (y - y_center).
  Matrix B = X.rowwise() - mu.transpose();
  B.array().colwise() *= sqrt_w.array();
  for (Index j = 0; j < p; ++j) B.col(j) /= scale[j];
  Vector yt = (y.array() - y_center).matrix().cwiseProduct(sqrt_w);

  // Covariance-form sweeps: G and q are computed once, after which one full
  // sweep costs O(p^2) instead of O(n p).
  Matrix G = Matrix::Zero(p, p);
  G.selfadjointView<Eigen::Lower>().rankUpdate(B.transpose());
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  const Vector q = B.transpose() * yt;

  const Vector l1 = 0.5 * (1.0 - cfg.alpha) * cfg.lambda * costs.costs;
  const Vector l2 = cfg.alpha * cfg.lambda * costs.costs;

  Vector beta = Vector::Zero(p);
  Vector g = Vector::Zero(p);  // g = G * beta, maintained incrementally

  const auto descent_objective = [&]() {
    // exact recomputation; only used when tracing
    const double rss = (yt - B * beta).squaredNorm();
    double pen = 0.0;
    for (Index j = 0; j < p; ++j)
      pen += 2.0 * l1[j] * std::abs(beta[j]) + l2[j] * beta[j] * beta[j];
    return rss + pen;
  };

  if (cfg.record_trace) out.objective_trace.push_back(descent_objective());

  bool converged = false;
  int sweep = 0;
  for (; sweep < cfg.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (dropped[static_cast<std::size_t>(j)]) continue;
      const double denom = G(j, j) + l2[j];
      if (denom <= 0.0) continue;
      const double rho = q[j] - g[j] + G(j, j) * beta[j];
      const double updated = soft_threshold(rho, l1[j]) / denom;
      const double delta = updated - beta[j];
      if (delta != 0.0) {
        g += delta * G.col(j);
        beta[j] = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (cfg.record_trace) out.objective_trace.push_back(descent_objective());
    if (max_delta < cfg.tolerance) {
      converged = true;
      ++sweep;
      break;
    }
  }

  out.beta = Vector::Zero(p);
  for (Index j = 0; j < p; ++j)
    if (!dropped[static_cast<std::size_t>(j)]) out.beta[j] = beta[j] / scale[j];
  out.intercept = cfg.fit_intercept ? y_center - out.beta.dot(mu) : 0.0;
  out.sweeps_used = sweep;
  out.converged = converged;

  SolverConfig value_cfg = cfg;
  value_cfg.sample_weights = w;
  out.objective_value =
      objective(X, y, out.beta, out.intercept, costs, value_cfg);
  return out;
}

}  // namespace celime
