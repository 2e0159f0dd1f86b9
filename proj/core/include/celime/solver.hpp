#pragma once

#include <vector>

#include "celime/types.hpp"

namespace celime {

// Cost-weighted elastic net:
//
//   minimize  sum_i w_i (y_i - b0 - x_i'beta)^2
//             + (1-alpha) * lambda * sum_j c_j |beta_j|
//             + alpha     * lambda * sum_j c_j beta_j^2
//
// alpha = 0 gives a cost-weighted lasso, alpha = 1 a cost-weighted ridge,
// and c = 1 recovers the plain elastic net.  The residual term is an
// unnormalized (weighted) sum of squares, so lambda scales with the number
// of rows.

struct SolverConfig {
  double lambda = 1.0;
  double alpha = 0.5;  // 0 = pure L1, 1 = pure L2
  // Optional nonnegative per-sample weights (empty = unweighted).  fit()
  // normalizes them to sum n so lambda keeps a comparable meaning.
  Vector sample_weights;
  double tolerance = 1e-7;  // max coordinate change per sweep, descent scale
  int max_sweeps = 10000;
  // Center and scale columns to unit weighted variance before descent and
  // map coefficients back to the original scale afterward.  Penalties are
  // applied on the standardized scale; each feature keeps its own cost c_j.
  bool standardize = true;
  // Unpenalized intercept, updated in closed form (via weighted centering).
  bool fit_intercept = true;
  // Record the internal objective after every sweep (slows the fit; the
  // trace also stores the value at the initial all-zero iterate).
  bool record_trace = false;

  void validate(Index n) const;
};

struct Coefficients {
  Vector beta;  // original feature scale, length p
  double intercept = 0.0;
  // Objective formula evaluated at (beta, intercept) with the normalized
  // sample weights.
  double objective_value = 0.0;
  int sweeps_used = 0;
  bool converged = false;
  // Columns with zero weighted variance, pinned to beta = 0.
  std::vector<Index> dropped_features;
  // Internal (descent-scale) objective per sweep when record_trace is set;
  // entry 0 is the value before the first sweep.
  std::vector<double> objective_trace;
};

// sign(z) * max(|z| - gamma, 0)
double soft_threshold(double z, double gamma);

// Evaluates the objective exactly as written above, with cfg.sample_weights
// used verbatim (no normalization; empty = all ones).
double objective(const Matrix& X, const Vector& y, const Vector& beta,
                 double intercept, const CostVector& costs,
                 const SolverConfig& cfg);

// Cyclic coordinate descent (coordinates 0..p-1 in order) on the objective
// above.  Non-convergence within max_sweeps returns the last (best) iterate
// with converged = false.
Coefficients fit(const Matrix& X, const Vector& y, const CostVector& costs,
                 const SolverConfig& cfg);

}  // namespace celime
