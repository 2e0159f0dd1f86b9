#include "celime/blackbox.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "celime/io_util.hpp"

namespace celime {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr double kGradTol = 1e-6;
constexpr int kMaxNewtonIters = 100;

double sigmoid(double m) {
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

// log(1 + exp(m)) without overflow
double log1pexp(double m) {
  if (m > 0.0) return m + std::log1p(std::exp(-m));
  return std::log1p(std::exp(m));
}

void check_design(const Matrix& X, const Vector& w) {
  require(X.cols() == w.size(),
          "feature count mismatch between model and data");
  require_finite(X, "X");
}

}  // namespace

double logistic_loss(const Matrix& X, const IntVector& y, const Vector& w,
                     double intercept, double l2) {
  require(X.rows() == y.size(), "y length must match row count");
  check_design(X, w);
  const Vector margin = (X * w).array() + intercept;
  double loss = 0.0;
  for (Index i = 0; i < margin.size(); ++i)
    loss += log1pexp(margin[i]) - static_cast<double>(y[i]) * margin[i];
  return loss + 0.5 * l2 * w.squaredNorm();
}

void logistic_loss_gradient(const Matrix& X, const IntVector& y,
                            const Vector& w, double intercept, double l2,
                            Vector& grad_w, double& grad_intercept) {
  require(X.rows() == y.size(), "y length must match row count");
  check_design(X, w);
  const Vector margin = (X * w).array() + intercept;
  Vector diff(margin.size());
  for (Index i = 0; i < margin.size(); ++i)
    diff[i] = sigmoid(margin[i]) - static_cast<double>(y[i]);
  grad_w = X.transpose() * diff + l2 * w;
  grad_intercept = diff.sum();
}

BlackBoxModel train(const Matrix& X, const IntVector& y, double l2,
                    std::uint64_t seed) {
  (void)seed;  // the optimizer is deterministic from the zero start
  const Index n = X.rows();
  const Index p = X.cols();
  require(n >= 1 && p >= 1, "design matrix must be at least 1x1");
  require(y.size() == n, "y length must match row count");
  require_finite(X, "X");
  require(l2 >= 0.0 && std::isfinite(l2), "l2 must be >= 0");
  int positives = 0;
  for (Index i = 0; i < n; ++i) {
    require(y[i] == 0 || y[i] == 1, "labels must be 0 or 1");
    positives += y[i];
  }
  require(positives > 0 && positives < n,
          "training labels must contain both classes");

  Vector w = Vector::Zero(p);
  double b = 0.0;
  double loss = logistic_loss(X, y, w, b, l2);

  Vector grad_w(p);
  double grad_b = 0.0;
  int iter = 0;
  for (; iter < kMaxNewtonIters; ++iter) {
    logistic_loss_gradient(X, y, w, b, l2, grad_w, grad_b);
    const double gnorm =
        std::sqrt(grad_w.squaredNorm() + grad_b * grad_b);
    if (gnorm < kGradTol) break;

    const Vector margin = (X * w).array() + b;
    Vector s(n);
    for (Index i = 0; i < n; ++i) {
      const double pr = sigmoid(margin[i]);
      s[i] = std::max(pr * (1.0 - pr), 1e-12);
    }
    // Hessian over [w; b] with the penalty only on the weight block.
    Matrix H = Matrix::Zero(p + 1, p + 1);
    Matrix Xs = X.array().colwise() * s.array();
    H.topLeftCorner(p, p) = X.transpose() * Xs;
    H.topLeftCorner(p, p).diagonal().array() += l2;
    H.block(0, p, p, 1) = Xs.colwise().sum().transpose();
    H.block(p, 0, 1, p) = H.block(0, p, p, 1).transpose();
    H(p, p) = s.sum();

    Vector grad(p + 1);
    grad.head(p) = grad_w;
    grad[p] = grad_b;
    Vector step = H.ldlt().solve(grad);
    if (!step.allFinite()) throw NumericError("Newton step is non-finite");

    // backtracking keeps the damped iteration monotone
    double t = 1.0;
    Vector w_next;
    double b_next = 0.0, loss_next = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      w_next = w - t * step.head(p);
      b_next = b - t * step[p];
      loss_next = logistic_loss(X, y, w_next, b_next, l2);
      if (loss_next <= loss) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    w = w_next;
    b = b_next;
    loss = loss_next;
  }

  BlackBoxModel model;
  model.weights = w;
  model.intercept = b;
  model.meta = TrainingMeta{l2, iter, loss};
  return model;
}

Vector predict_proba(const BlackBoxModel& model, const Matrix& X) {
  check_design(X, model.weights);
  const Vector margin = (X * model.weights).array() + model.intercept;
  Vector proba(margin.size());
  for (Index i = 0; i < margin.size(); ++i)
    proba[i] = std::clamp(sigmoid(margin[i]), kProbClamp, 1.0 - kProbClamp);
  return proba;
}

IntVector predict_label(const BlackBoxModel& model, const Matrix& X,
                        double threshold) {
  const Vector proba = predict_proba(model, X);
  IntVector labels(proba.size());
  for (Index i = 0; i < proba.size(); ++i)
    labels[i] = proba[i] >= threshold ? 1 : 0;
  return labels;
}

void save_model(const BlackBoxModel& model, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["weights"] = std::vector<double>(
      model.weights.data(), model.weights.data() + model.weights.size());
  doc["intercept"] = model.intercept;
  doc["meta"] = {{"l2", model.meta.l2},
                 {"iterations", model.meta.iterations},
                 {"final_loss", model.meta.final_loss}};
  write_file_atomic(path, doc.dump(2) + "\n");
}

BlackBoxModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open model file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    BlackBoxModel model;
    const auto w = doc.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Vector>(w.data(), static_cast<Index>(w.size()));
    model.intercept = doc.at("intercept").get<double>();
    model.meta.l2 = doc.at("meta").at("l2").get<double>();
    model.meta.iterations = doc.at("meta").at("iterations").get<int>();
    model.meta.final_loss = doc.at("meta").at("final_loss").get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model file " + path.string() + ": " + e.what());
  }
}

}  // namespace celime
