#include "celime/lime.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "celime/rng.hpp"

namespace celime {

FeatureStats compute_feature_stats(const Matrix& X) {
  require(X.rows() >= 1 && X.cols() >= 1, "need a nonempty matrix");
  require_finite(X, "X");
  const auto n = static_cast<double>(X.rows());
  FeatureStats stats;
  stats.mean = X.colwise().mean();
  stats.stddev.resize(X.cols());
  stats.is_boolean.resize(static_cast<std::size_t>(X.cols()));
  for (Index j = 0; j < X.cols(); ++j) {
    const auto centered = X.col(j).array() - stats.mean[j];
    stats.stddev[j] = std::sqrt(centered.square().sum() / n);
    stats.is_boolean[static_cast<std::size_t>(j)] =
        ((X.col(j).array() == 0.0) || (X.col(j).array() == 1.0)).all();
  }
  return stats;
}

void PerturbationConfig::validate() const {
  require(n_samples >= 10, "n_samples must be >= 10");
  require(noise_scale >= 0.0 && std::isfinite(noise_scale),
          "noise_scale must be >= 0");
  require(boolean_resample_prob >= 0.0 && boolean_resample_prob <= 1.0,
          "boolean_resample_prob must lie in [0, 1]");
  require(std::isfinite(kernel_width), "kernel_width must be finite");
}

double PerturbationConfig::effective_width(Index p) const {
  return kernel_width > 0.0 ? kernel_width
                            : 0.75 * std::sqrt(static_cast<double>(p));
}

Matrix sample_perturbations(const Vector& x, const FeatureStats& stats,
                            const PerturbationConfig& cfg) {
  cfg.validate();
  const Index p = x.size();
  require(stats.mean.size() == p && stats.stddev.size() == p,
          "feature stats length must match x");
  require_finite(x, "x");
  require_finite(stats.stddev, "stddev");
  require((stats.stddev.array() >= 0.0).all(), "stddev must be nonnegative");

  Matrix Z(cfg.n_samples, p);
  Z.row(0) = x.transpose();
  if (cfg.noise_scale == 0.0) {
    Z.rowwise() = x.transpose();
    return Z;
  }

  Rng rng(cfg.seed);
  for (Index i = 1; i < cfg.n_samples; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (stats.is_boolean[static_cast<std::size_t>(j)]) {
        if (rng.uniform01() < cfg.boolean_resample_prob)
          Z(i, j) = rng.bernoulli(stats.mean[j]) ? 1.0 : 0.0;
        else
          Z(i, j) = x[j];
      } else {
        Z(i, j) = x[j] + rng.normal(0.0, cfg.noise_scale * stats.stddev[j]);
      }
    }
  }
  return Z;
}

Vector kernel_weights(const Vector& x, const Matrix& Z,
                      const FeatureStats& stats, double width) {
  const Index p = x.size();
  require(Z.cols() == p, "Z column count must match x");
  require(stats.stddev.size() == p, "feature stats length must match x");
  require(width > 0.0 && std::isfinite(width), "width must be positive");

  Vector inv_sd = Vector::Zero(p);
  for (Index j = 0; j < p; ++j)
    if (stats.stddev[j] > 0.0) inv_sd[j] = 1.0 / stats.stddev[j];

  Vector w(Z.rows());
  for (Index i = 0; i < Z.rows(); ++i) {
    const double d2 =
        ((Z.row(i).transpose() - x).array() * inv_sd.array()).square().sum();
    w[i] = std::exp(-d2 / (width * width));
  }
  return w;
}

Explanation explain(const BlackBoxModel& model, const Vector& x,
                    const CostVector& costs, const FeatureStats& stats,
                    const SolverConfig& solver_cfg,
                    const PerturbationConfig& pert_cfg, Index event_index) {
  const Index p = model.weights.size();
  require(x.size() == p, "event length must match the model");
  require(costs.size() == p, "cost vector length must match the model");

  const Matrix Z = sample_perturbations(x, stats, pert_cfg);
  const Vector target = predict_proba(model, Z);
  const Vector kernel =
      kernel_weights(x, Z, stats, pert_cfg.effective_width(p));

  SolverConfig cfg = solver_cfg;
  cfg.sample_weights = kernel;
  const Coefficients coef = fit(Z, target, costs, cfg);

  const Vector surrogate = (Z * coef.beta).array() + coef.intercept;
  const double kernel_total = kernel.sum();
  const double target_mean = kernel.dot(target) / kernel_total;
  const double ss_res =
      (kernel.array() * (target - surrogate).array().square()).sum();
  const double ss_tot =
      (kernel.array() * (target.array() - target_mean).square()).sum();

  Explanation out;
  out.event_index = event_index;
  out.weights = coef.beta;
  out.intercept = coef.intercept;
  if (ss_tot > 1e-30)
    out.local_fidelity = 1.0 - ss_res / ss_tot;
  else
    out.local_fidelity = ss_res <= 1e-30 ? 1.0 : 0.0;
  out.total_cost_of_nonzero = 0.0;
  for (Index j = 0; j < p; ++j)
    if (coef.beta[j] != 0.0) out.total_cost_of_nonzero += costs[j];
  out.converged = coef.converged;
  return out;
}

std::string explanation_to_json(const Explanation& explanation,
                                const std::vector<std::string>& feature_names,
                                const CostVector& costs) {
  const Index p = explanation.weights.size();
  require(static_cast<Index>(feature_names.size()) == p,
          "feature name count must match weights");
  require(costs.size() == p, "cost vector length must match weights");

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(explanation.weights[a]) > std::abs(explanation.weights[b]);
  });

  nlohmann::json features = nlohmann::json::array();
  for (Index j : order) {
    features.push_back({{"name", feature_names[static_cast<std::size_t>(j)]},
                        {"weight", explanation.weights[j]},
                        {"cost", costs[j]}});
  }
  nlohmann::json doc{{"event_index", explanation.event_index},
                     {"intercept", explanation.intercept},
                     {"local_fidelity", explanation.local_fidelity},
                     {"total_cost_of_nonzero", explanation.total_cost_of_nonzero},
                     {"converged", explanation.converged},
                     {"features", std::move(features)}};
  return doc.dump(2) + "\n";
}

}  // namespace celime
