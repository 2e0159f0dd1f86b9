#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "celime/datagen.hpp"
#include "celime/lime.hpp"
#include "celime/pick.hpp"
#include "celime/solver.hpp"
#include "celime/types.hpp"

namespace celime {

// The four feature-ordering methods compared by the experiment harness.
enum class MethodId { kCeLime, kLime, kGlobal, kCeGlobal };

std::string method_name(MethodId method);
MethodId parse_method(const std::string& name);
const std::vector<MethodId>& all_methods();

struct CurvePoint {
  Index k = 0;  // number of revealed features
  double cumulative_cost = 0.0;
  double accuracy = 0.0;
};

// Accuracy and accumulated cost as features are revealed in importance
// order; point k = 0 is the all-mean-imputed baseline.
struct CostAccuracyCurve {
  std::vector<CurvePoint> points;  // k = 0..p
  MethodId method = MethodId::kCeLime;
  std::uint64_t trial_seed = 0;
  int trial = -1;
  bool fit_failure = false;  // some surrogate/global fit did not converge
};

struct LevelStats {
  double level = 0.0;
  Index survivors = 0;
  std::optional<double> mean_cost;      // absent when survivors == 0
  std::optional<double> standard_error;  // sample std / sqrt(survivors)
};

struct AggregateCurve {
  MethodId method = MethodId::kCeLime;
  std::vector<LevelStats> levels;
};

struct EvalConfig {
  double train_fraction = 0.8;  // stratified by class
  Index explain_events = 50;    // events feeding the explanation matrix
  double blackbox_l2 = 1.0;
  SolverConfig solver;          // lambda = 1, alpha = 0.5 defaults
  PerturbationConfig perturbation;
};

// For k = 0..p keep the true values of the top-k features of the ordering
// and replace the rest with the training-set means; accuracy is the match
// rate of predict_label against eval_y.
CostAccuracyCurve incremental_reveal_accuracy(const BlackBoxModel& model,
                                              const Matrix& eval_X,
                                              const IntVector& eval_y,
                                              const FeatureOrdering& ordering,
                                              const CostVector& costs,
                                              const Vector& train_means);

// One full trial: stratified split, black-box training, method-specific
// feature ordering, incremental reveal on the held-out split.  The LIME
// baseline fits surrogates with unit costs but the trial costs still price
// the curve.  Deterministic given (dataset, costs, method, config, seed).
CostAccuracyCurve run_trial(const Dataset& dataset, const CostVector& costs,
                            MethodId method, const EvalConfig& config,
                            std::uint64_t seed);

// Minimum cumulative cost over points with accuracy >= level; absent when
// the curve never reaches the level (the trial is a non-survivor).
std::optional<double> cost_at_accuracy(const CostAccuracyCurve& curve,
                                       double level);

// Survivors-only mean and standard error (sample std / sqrt(count)) of the
// cost at each accuracy level.  All curves must share one method.
AggregateCurve aggregate(const std::vector<CostAccuracyCurve>& curves,
                         const std::vector<double>& levels);

// columns: method,trial,k,cost,accuracy
std::string curves_to_csv(const std::vector<CostAccuracyCurve>& curves);
// columns: method,level,mean_cost,stderr,survivors (empty stats when no
// trial survives a level)
std::string aggregates_to_csv(const std::vector<AggregateCurve>& aggregates);

}  // namespace celime
