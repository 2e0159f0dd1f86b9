#pragma once

#include <string>
#include <vector>

#include "celime/lime.hpp"
#include "celime/types.hpp"

namespace celime {

// Entries below this magnitude do not count as used features when computing
// coverage (solver tolerance floor).
inline constexpr double kCoverageNonzero = 1e-8;

struct ExplanationMatrix {
  Matrix W;  // one row of local surrogate weights per explained event
  std::vector<Index> event_indices;
  bool all_converged = true;  // false if any surrogate fit hit max_sweeps
};

struct ImportanceVector {
  Vector I;  // nonnegative, length p
};

struct FeatureOrdering {
  // order[k] is the k-th most important feature
  std::vector<Index> order;
};

// Explains each row of X_subset and stacks the local weight vectors.  The
// per-event RNG seed is derived from (pert_cfg.seed, event index), so any
// subset of events reproduces the same rows.  event_indices defaults to
// 0..rows-1.
ExplanationMatrix explanation_matrix(const BlackBoxModel& model,
                                     const Matrix& X_subset,
                                     const CostVector& costs,
                                     const FeatureStats& stats,
                                     const SolverConfig& solver_cfg,
                                     const PerturbationConfig& pert_cfg,
                                     std::vector<Index> event_indices = {});

// Global feature importance I_j = sqrt(sum_i |W_ij|).
ImportanceVector importance_vector(const ExplanationMatrix& W);

// Coverage of a set of rows: sum of I_j over features used by at least one
// selected explanation.  Monotone and submodular in the row set.
double coverage(const ExplanationMatrix& W, const ImportanceVector& I,
                const std::vector<Index>& rows);

// Greedy coverage maximization over events; ties go to the lowest event
// index.  Returns exactly min(budget, n_explained) event indices in
// selection order.
std::vector<Index> greedy_pick(const ExplanationMatrix& W,
                               const ImportanceVector& I, Index budget);

// Descending sort of I; ties go to the lowest feature index.  Any prefix is
// the selected feature subset at that cutoff.
FeatureOrdering feature_ordering(const ImportanceVector& I);

// Structured-text (JSON) report: per-feature importance and cost in
// importance order, plus the picked representative events.
std::string pick_to_json(const ExplanationMatrix& W, const ImportanceVector& I,
                         const FeatureOrdering& ordering,
                         const std::vector<Index>& picked,
                         const std::vector<std::string>& feature_names,
                         const CostVector& costs);

}  // namespace celime
