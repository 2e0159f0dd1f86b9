#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "celime/blackbox.hpp"
#include "celime/solver.hpp"
#include "celime/types.hpp"

namespace celime {

// Per-feature training statistics driving the perturbation scheme and the
// standardized locality distance.
struct FeatureStats {
  Vector mean;
  Vector stddev;
  // Boolean columns (every training value in {0,1}) are perturbed by
  // resampling from their marginal instead of adding Gaussian noise.
  std::vector<bool> is_boolean;
};

FeatureStats compute_feature_stats(const Matrix& X);

struct PerturbationConfig {
  Index n_samples = 5000;  // >= 10
  // Locality kernel width on the standardized distance; <= 0 selects the
  // default 0.75 * sqrt(p).
  double kernel_width = 0.0;
  // Multiplier on the per-feature training std for Gaussian noise; 0 turns
  // all perturbation off (every row equals x).
  double noise_scale = 1.0;
  double boolean_resample_prob = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
  double effective_width(Index p) const;
};

// Local surrogate fit around one event.
struct Explanation {
  Index event_index = -1;
  Vector weights;  // local surrogate coefficients, length p
  double intercept = 0.0;
  // Kernel-weighted R^2 of the surrogate against the black-box probability
  // on the perturbation set.
  double local_fidelity = 0.0;
  double total_cost_of_nonzero = 0.0;
  bool converged = true;
};

// n_samples rows around x; row 0 is x itself, untouched.  Continuous
// feature j gets independent Normal(0, (noise_scale * std_j)^2) noise;
// zero-std features are never perturbed.  Deterministic given cfg.seed.
Matrix sample_perturbations(const Vector& x, const FeatureStats& stats,
                            const PerturbationConfig& cfg);

// w_i = exp(-d(x, z_i)^2 / width^2) with d the Euclidean distance on
// features standardized by the training std.  w = 1 at z = x.
Vector kernel_weights(const Vector& x, const Matrix& Z,
                      const FeatureStats& stats, double width);

// Fits the cost-weighted elastic net to kernel-weighted perturbations of x
// against the black-box probability (not the hard label).  Unit costs give
// the plain local surrogate baseline.
Explanation explain(const BlackBoxModel& model, const Vector& x,
                    const CostVector& costs, const FeatureStats& stats,
                    const SolverConfig& solver_cfg,
                    const PerturbationConfig& pert_cfg,
                    Index event_index = -1);

// Structured-text (JSON) record listing per-feature name, weight and cost
// sorted by |weight| descending; the data behind a bar-chart rendering.
std::string explanation_to_json(const Explanation& explanation,
                                const std::vector<std::string>& feature_names,
                                const CostVector& costs);

}  // namespace celime
