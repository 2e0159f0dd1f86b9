#pragma once

#include <cstdint>
#include <filesystem>

#include "celime/types.hpp"

namespace celime {

// The opaque classifier whose decisions get explained.  Internally an
// L2-regularized logistic regression fit by damped Newton iterations;
// downstream code must only go through predict_proba / predict_label.

struct TrainingMeta {
  double l2 = 1.0;
  int iterations = 0;
  double final_loss = 0.0;
};

struct BlackBoxModel {
  Vector weights;
  double intercept = 0.0;
  TrainingMeta meta;
};

// Regularized negative log-likelihood:
//   sum_i [ log(1 + exp(m_i)) - y_i m_i ] + (l2/2) ||w||^2,  m_i = x_i'w + b.
// The intercept is unpenalized.
double logistic_loss(const Matrix& X, const IntVector& y, const Vector& w,
                     double intercept, double l2);

// Analytic gradient of logistic_loss; grad_w gets X'(sigma(m) - y) + l2*w,
// grad_intercept gets sum(sigma(m) - y).
void logistic_loss_gradient(const Matrix& X, const IntVector& y,
                            const Vector& w, double intercept, double l2,
                            Vector& grad_w, double& grad_intercept);

// Deterministic given (X, y, l2, seed); stops at gradient norm < 1e-6 or
// 100 Newton iterations.  Requires both classes present in y.
BlackBoxModel train(const Matrix& X, const IntVector& y, double l2 = 1.0,
                    std::uint64_t seed = 0);

// sigmoid(Xw + b) per row, clamped away from {0, 1}.
Vector predict_proba(const BlackBoxModel& model, const Matrix& X);

// 1 iff predict_proba >= threshold.
IntVector predict_label(const BlackBoxModel& model, const Matrix& X,
                        double threshold = 0.5);

// Flat structured-text (JSON) record: weights, intercept, training meta.
void save_model(const BlackBoxModel& model, const std::filesystem::path& path);
BlackBoxModel load_model(const std::filesystem::path& path);

}  // namespace celime
