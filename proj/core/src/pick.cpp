#include "celime/pick.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "celime/rng.hpp"

namespace celime {

ExplanationMatrix explanation_matrix(const BlackBoxModel& model,
                                     const Matrix& X_subset,
                                     const CostVector& costs,
                                     const FeatureStats& stats,
                                     const SolverConfig& solver_cfg,
                                     const PerturbationConfig& pert_cfg,
                                     std::vector<Index> event_indices) {
  const Index rows = X_subset.rows();
  require(rows >= 1, "need at least one event to explain");
  if (event_indices.empty()) {
    event_indices.resize(static_cast<std::size_t>(rows));
    std::iota(event_indices.begin(), event_indices.end(), Index{0});
  }
  require(static_cast<Index>(event_indices.size()) == rows,
          "event_indices length must match X_subset rows");

  ExplanationMatrix out;
  out.W.resize(rows, X_subset.cols());
  out.event_indices = std::move(event_indices);
  for (Index i = 0; i < rows; ++i) {
    PerturbationConfig per_event = pert_cfg;
    per_event.seed = derive_seed(
        pert_cfg.seed, "event",
        static_cast<std::uint64_t>(out.event_indices[static_cast<std::size_t>(i)]));
    const Explanation ex =
        explain(model, X_subset.row(i).transpose(), costs, stats, solver_cfg,
                per_event, out.event_indices[static_cast<std::size_t>(i)]);
    out.W.row(i) = ex.weights.transpose();
    if (!ex.converged) out.all_converged = false;
  }
  return out;
}

ImportanceVector importance_vector(const ExplanationMatrix& W) {
  require(W.W.rows() >= 1, "explanation matrix is empty");
  require_finite(W.W, "W");
  ImportanceVector out;
  out.I = W.W.array().abs().colwise().sum().sqrt().transpose();
  return out;
}

namespace {

std::vector<bool> used_features(const Matrix& W, Index row) {
  std::vector<bool> used(static_cast<std::size_t>(W.cols()));
  for (Index j = 0; j < W.cols(); ++j)
    used[static_cast<std::size_t>(j)] = std::abs(W(row, j)) > kCoverageNonzero;
  return used;
}

}  // namespace

double coverage(const ExplanationMatrix& W, const ImportanceVector& I,
                const std::vector<Index>& rows) {
  require(I.I.size() == W.W.cols(), "importance length must match W columns");
  std::vector<bool> covered(static_cast<std::size_t>(W.W.cols()), false);
  for (Index r : rows)
    for (Index j = 0; j < W.W.cols(); ++j)
      if (std::abs(W.W(r, j)) > kCoverageNonzero)
        covered[static_cast<std::size_t>(j)] = true;
  double total = 0.0;
  for (Index j = 0; j < W.W.cols(); ++j)
    if (covered[static_cast<std::size_t>(j)]) total += I.I[j];
  return total;
}

std::vector<Index> greedy_pick(const ExplanationMatrix& W,
                               const ImportanceVector& I, Index budget) {
  const Index rows = W.W.rows();
  require(budget >= 1, "budget must be >= 1");
  require(I.I.size() == W.W.cols(), "importance length must match W columns");
  const Index take = std::min(budget, rows);

  std::vector<bool> covered(static_cast<std::size_t>(W.W.cols()), false);
  std::vector<bool> selected(static_cast<std::size_t>(rows), false);
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(take));

  for (Index step = 0; step < take; ++step) {
    Index best_row = -1;
    double best_gain = -1.0;
    Index best_event = -1;
    for (Index r = 0; r < rows; ++r) {
      if (selected[static_cast<std::size_t>(r)]) continue;
      double gain = 0.0;
      for (Index j = 0; j < W.W.cols(); ++j)
        if (!covered[static_cast<std::size_t>(j)] &&
            std::abs(W.W(r, j)) > kCoverageNonzero)
          gain += I.I[j];
      const Index event = W.event_indices[static_cast<std::size_t>(r)];
      if (gain > best_gain || (gain == best_gain && event < best_event)) {
        best_gain = gain;
        best_row = r;
        best_event = event;
      }
    }
    selected[static_cast<std::size_t>(best_row)] = true;
    picked.push_back(best_event);
    const auto used = used_features(W.W, best_row);
    for (Index j = 0; j < W.W.cols(); ++j)
      if (used[static_cast<std::size_t>(j)])
        covered[static_cast<std::size_t>(j)] = true;
  }
  return picked;
}

FeatureOrdering feature_ordering(const ImportanceVector& I) {
  require(I.I.size() >= 1, "importance vector is empty");
  require_finite(I.I, "I");
  FeatureOrdering out;
  out.order.resize(static_cast<std::size_t>(I.I.size()));
  std::iota(out.order.begin(), out.order.end(), Index{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](Index a, Index b) { return I.I[a] > I.I[b]; });
  return out;
}

std::string pick_to_json(const ExplanationMatrix& W, const ImportanceVector& I,
                         const FeatureOrdering& ordering,
                         const std::vector<Index>& picked,
                         const std::vector<std::string>& feature_names,
                         const CostVector& costs) {
  require(static_cast<Index>(feature_names.size()) == I.I.size(),
          "feature name count must match importance length");
  require(costs.size() == I.I.size(),
          "cost vector length must match importance length");

  nlohmann::json features = nlohmann::json::array();
  for (Index j : ordering.order) {
    features.push_back({{"name", feature_names[static_cast<std::size_t>(j)]},
                        {"importance", I.I[j]},
                        {"cost", costs[j]}});
  }
  nlohmann::json doc{
      {"features", std::move(features)},
      {"picked_events", picked},
      {"picked_coverage",
       [&] {
         std::vector<Index> rows;
         for (Index r = 0; r < W.W.rows(); ++r) {
           const Index event = W.event_indices[static_cast<std::size_t>(r)];
           if (std::find(picked.begin(), picked.end(), event) != picked.end())
             rows.push_back(r);
         }
         return coverage(W, I, rows);
       }()},
      {"explained_events", W.event_indices}};
  return doc.dump(2) + "\n";
}

}  // namespace celime
