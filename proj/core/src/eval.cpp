#include "celime/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "celime/blackbox.hpp"
#include "celime/io_util.hpp"
#include "celime/rng.hpp"

namespace celime {

std::string method_name(MethodId method) {
  switch (method) {
    case MethodId::kCeLime: return "CE_LIME";
    case MethodId::kLime: return "LIME";
    case MethodId::kGlobal: return "GLOBAL";
    case MethodId::kCeGlobal: return "CE_GLOBAL";
  }
  return "unknown";
}

MethodId parse_method(const std::string& name) {
  for (MethodId m : all_methods())
    if (method_name(m) == name) return m;
  throw DataError("unknown method: " + name);
}

const std::vector<MethodId>& all_methods() {
  static const std::vector<MethodId> methods = {
      MethodId::kCeLime, MethodId::kLime, MethodId::kGlobal,
      MethodId::kCeGlobal};
  return methods;
}

CostAccuracyCurve incremental_reveal_accuracy(const BlackBoxModel& model,
                                              const Matrix& eval_X,
                                              const IntVector& eval_y,
                                              const FeatureOrdering& ordering,
                                              const CostVector& costs,
                                              const Vector& train_means) {
  const Index n = eval_X.rows();
  const Index p = eval_X.cols();
  require(n >= 1, "evaluation set is empty");
  require(eval_y.size() == n, "eval_y length must match eval_X rows");
  require(costs.size() == p, "cost vector length must match column count");
  require(train_means.size() == p, "train means length must match columns");
  require(static_cast<Index>(ordering.order.size()) == p,
          "ordering length must match column count");
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (Index f : ordering.order) {
    require(f >= 0 && f < p && !seen[static_cast<std::size_t>(f)],
            "ordering is not a permutation of 0..p-1");
    seen[static_cast<std::size_t>(f)] = true;
  }

  const auto accuracy_of = [&](const Matrix& masked) {
    const IntVector pred = predict_label(model, masked);
    Index hits = 0;
    for (Index i = 0; i < n; ++i)
      if (pred[i] == eval_y[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n);
  };

  Matrix masked(n, p);
  masked.rowwise() = train_means.transpose();

  CostAccuracyCurve curve;
  curve.points.reserve(static_cast<std::size_t>(p) + 1);
  curve.points.push_back({0, 0.0, accuracy_of(masked)});
  double cost = 0.0;
  for (Index k = 1; k <= p; ++k) {
    const Index feature = ordering.order[static_cast<std::size_t>(k - 1)];
    masked.col(feature) = eval_X.col(feature);
    cost += costs[feature];
    curve.points.push_back({k, cost, accuracy_of(masked)});
  }
  return curve;
}

namespace {

struct Split {
  std::vector<Index> train;
  std::vector<Index> eval;
};

Split stratified_split(const IntVector& y, double train_fraction,
                       std::uint64_t seed) {
  Rng rng(seed);
  Split split;
  for (int cls : {0, 1}) {
    std::vector<Index> members;
    for (Index i = 0; i < y.size(); ++i)
      if (y[i] == cls) members.push_back(i);
    if (members.empty()) continue;
    rng.shuffle(members);
    const auto n_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::floor(train_fraction * static_cast<double>(members.size()))));
    for (std::size_t k = 0; k < members.size(); ++k)
      (k < n_train ? split.train : split.eval).push_back(members[k]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.eval.begin(), split.eval.end());
  require(!split.eval.empty(), "evaluation split is empty; dataset too small");
  return split;
}

Matrix take_rows(const Matrix& X, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = X.row(rows[i]);
  return out;
}

IntVector take_rows(const IntVector& y, const std::vector<Index>& rows) {
  IntVector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = y[rows[i]];
  return out;
}

FeatureOrdering order_by_magnitude(const Vector& beta) {
  ImportanceVector importance;
  importance.I = beta.array().abs();
  return feature_ordering(importance);
}

}  // namespace

CostAccuracyCurve run_trial(const Dataset& dataset, const CostVector& costs,
                            MethodId method, const EvalConfig& config,
                            std::uint64_t seed) {
  const Index p = dataset.X.cols();
  require(dataset.y.size() == dataset.X.rows(), "X and y sizes disagree");
  require(costs.size() == p, "cost vector length must match column count");
  const int positives = dataset.y.sum();
  require(positives > 0 && positives < dataset.y.size(),
          "dataset must contain both classes");
  require(config.train_fraction > 0.0 && config.train_fraction < 1.0,
          "train_fraction must lie in (0, 1)");

  const Split split = stratified_split(dataset.y, config.train_fraction,
                                       derive_seed(seed, "split"));
  const Matrix X_train = take_rows(dataset.X, split.train);
  const IntVector y_train = take_rows(dataset.y, split.train);
  const Matrix X_eval = take_rows(dataset.X, split.eval);
  const IntVector y_eval = take_rows(dataset.y, split.eval);

  const BlackBoxModel model =
      train(X_train, y_train, config.blackbox_l2, derive_seed(seed, "blackbox"));
  const FeatureStats stats = compute_feature_stats(X_train);

  FeatureOrdering ordering;
  bool fit_failure = false;

  if (method == MethodId::kCeLime || method == MethodId::kLime) {
    std::vector<Index> candidates(static_cast<std::size_t>(X_train.rows()));
    std::iota(candidates.begin(), candidates.end(), Index{0});
    Rng event_rng(derive_seed(seed, "events"));
    event_rng.shuffle(candidates);
    const auto n_events = std::min<std::size_t>(
        candidates.size(), static_cast<std::size_t>(config.explain_events));
    std::vector<Index> events(candidates.begin(),
                              candidates.begin() + static_cast<std::ptrdiff_t>(n_events));
    std::sort(events.begin(), events.end());

    const CostVector surrogate_costs =
        method == MethodId::kCeLime ? costs : CostVector::ones(p);
    PerturbationConfig pert = config.perturbation;
    pert.seed = derive_seed(seed, "lime");
    const ExplanationMatrix W =
        explanation_matrix(model, take_rows(X_train, events), surrogate_costs,
                           stats, config.solver, pert, events);
    // a non-converged surrogate flags the curve but does not abort the trial
    fit_failure = !W.all_converged;
    ordering = feature_ordering(importance_vector(W));
  } else {
    const CostVector global_costs =
        method == MethodId::kCeGlobal ? costs : CostVector::ones(p);
    const Vector target = predict_proba(model, X_train);
    const Coefficients coef = fit(X_train, target, global_costs, config.solver);
    fit_failure = !coef.converged;
    ordering = order_by_magnitude(coef.beta);
  }

  CostAccuracyCurve curve = incremental_reveal_accuracy(
      model, X_eval, y_eval, ordering, costs, stats.mean);
  curve.method = method;
  curve.trial_seed = seed;
  curve.fit_failure = fit_failure;
  return curve;
}

std::optional<double> cost_at_accuracy(const CostAccuracyCurve& curve,
                                       double level) {
  require(level >= 0.0 && level <= 1.0, "level must lie in [0, 1]");
  std::optional<double> best;
  for (const auto& pt : curve.points)
    if (pt.accuracy >= level && (!best || pt.cumulative_cost < *best))
      best = pt.cumulative_cost;
  return best;
}

AggregateCurve aggregate(const std::vector<CostAccuracyCurve>& curves,
                         const std::vector<double>& levels) {
  require(!curves.empty(), "need at least one trial curve");
  AggregateCurve out;
  out.method = curves.front().method;
  for (const auto& c : curves)
    require(c.method == out.method, "aggregate expects a single method");

  for (double level : levels) {
    LevelStats stats;
    stats.level = level;
    std::vector<double> values;
    for (const auto& curve : curves)
      if (const auto cost = cost_at_accuracy(curve, level)) values.push_back(*cost);
    stats.survivors = static_cast<Index>(values.size());
    if (!values.empty()) {
      const double mean =
          std::accumulate(values.begin(), values.end(), 0.0) /
          static_cast<double>(values.size());
      stats.mean_cost = mean;
      if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double sample_sd =
            std::sqrt(ss / static_cast<double>(values.size() - 1));
        stats.standard_error =
            sample_sd / std::sqrt(static_cast<double>(values.size()));
      } else {
        stats.standard_error = 0.0;
      }
    }
    out.levels.push_back(stats);
  }
  return out;
}

std::string curves_to_csv(const std::vector<CostAccuracyCurve>& curves) {
  std::ostringstream out;
  out << "method,trial,k,cost,accuracy\n";
  for (const auto& curve : curves)
    for (const auto& pt : curve.points)
      out << method_name(curve.method) << ',' << curve.trial << ',' << pt.k
          << ',' << format_double(pt.cumulative_cost) << ','
          << format_double(pt.accuracy) << '\n';
  return out.str();
}

std::string aggregates_to_csv(const std::vector<AggregateCurve>& aggregates) {
  std::ostringstream out;
  out << "method,level,mean_cost,stderr,survivors\n";
  for (const auto& agg : aggregates)
    for (const auto& ls : agg.levels) {
      out << method_name(agg.method) << ',' << format_double(ls.level) << ',';
      if (ls.mean_cost) out << format_double(*ls.mean_cost);
      out << ',';
      if (ls.standard_error) out << format_double(*ls.standard_error);
      out << ',' << ls.survivors << '\n';
    }
  return out.str();
}

}  // namespace celime
