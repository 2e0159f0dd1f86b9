#include <celime/solver.hpp>

#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace celime;
using test_util::orthonormal_columns;
using test_util::random_costs;
using test_util::random_matrix;
using test_util::random_vector;

namespace {

SolverConfig raw_config(double lambda, double alpha) {
  SolverConfig cfg;
  cfg.lambda = lambda;
  cfg.alpha = alpha;
  cfg.standardize = false;
  cfg.fit_intercept = false;
  cfg.tolerance = 1e-12;
  return cfg;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("soft threshold definition") {
  CHECK(soft_threshold(5.0, 2.0) == 3.0);
  CHECK(soft_threshold(-5.0, 2.0) == -3.0);
  CHECK(soft_threshold(1.0, 2.0) == 0.0);
  CHECK(soft_threshold(-1.5, 2.0) == 0.0);
  CHECK(soft_threshold(0.0, 0.0) == 0.0);
  // shrinkage never exceeds |z| and keeps the sign
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const double z = rng.uniform(-10.0, 10.0);
    const double g = rng.uniform(0.0, 10.0);
    const double s = soft_threshold(z, g);
    CHECK(std::abs(s) <= std::abs(z));
    CHECK(s * z >= 0.0);
  }
}

TEST_CASE("objective at beta zero is centered sum of squares") {
  Rng rng(21);
  const Matrix X = random_matrix(17, 5, rng);
  const Vector y = random_vector(17, rng);
  const double ybar = y.mean();
  SolverConfig cfg;
  cfg.lambda = 3.0;
  cfg.alpha = 0.4;
  const double value =
      objective(X, y, Vector::Zero(5), ybar, CostVector(random_costs(5, rng)), cfg);
  CHECK(value == doctest::Approx((y.array() - ybar).square().sum()).epsilon(1e-12));
}

TEST_CASE("unit costs reduce the objective to the plain elastic net") {
  Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    const Matrix X = random_matrix(12, 4, rng);
    const Vector y = random_vector(12, rng);
    const Vector beta = random_vector(4, rng);
    const double b0 = rng.normal();
    SolverConfig cfg;
    cfg.lambda = rng.uniform(0.0, 3.0);
    cfg.alpha = rng.uniform(0.0, 1.0);
    const double got =
        objective(X, y, beta, b0, CostVector::ones(4), cfg);
    // plain elastic net value, written out independently
    Vector r = y - X * beta;
    r.array() -= b0;
    const double expected = r.squaredNorm() +
                            (1.0 - cfg.alpha) * cfg.lambda * beta.array().abs().sum() +
                            cfg.alpha * cfg.lambda * beta.array().square().sum();
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("one sample, one feature, hand value") {
  Matrix X(1, 1);
  X << 2.0;
  Vector y(1);
  y << 4.0;
  Vector beta(1);
  beta << 1.0;
  Vector c(1);
  c << 3.0;
  SolverConfig cfg;
  cfg.lambda = 1.0;
  cfg.alpha = 0.0;
  CHECK(objective(X, y, beta, 0.0, CostVector(c), cfg) == doctest::Approx(7.0));
}

TEST_CASE("objective rejects bad input") {
  Matrix X(2, 2);
  X << 1, 2, 3, 4;
  Vector y(2);
  y << 1, 2;
  SolverConfig cfg;
  CHECK_THROWS_AS(objective(X, Vector::Zero(3), Vector::Zero(2), 0.0,
                            CostVector::ones(2), cfg),
                  DataError);
  CHECK_THROWS_AS(objective(X, y, Vector::Zero(1), 0.0, CostVector::ones(2), cfg),
                  DataError);
  Vector bad_costs(2);
  bad_costs << 1.0, 0.0;
  CHECK_THROWS_AS(CostVector(bad_costs), DataError);
  Matrix Xnan = X;
  Xnan(0, 0) = std::nan("");
  CHECK_THROWS_AS(objective(Xnan, y, Vector::Zero(2), 0.0, CostVector::ones(2), cfg),
                  DataError);
}

TEST_CASE("orthonormal columns with alpha 0 match the soft-threshold form") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const Matrix X = orthonormal_columns(30, 4, rng);
    const Vector y = random_vector(30, rng);
    const Vector c = random_costs(4, rng);
    const double lambda = rng.uniform(0.1, 2.0);
    const Coefficients coef = fit(X, y, CostVector(c), raw_config(lambda, 0.0));
    REQUIRE(coef.converged);
    for (Index j = 0; j < 4; ++j) {
      const double expected =
          soft_threshold(X.col(j).dot(y), 0.5 * lambda * c[j]);
      CHECK(coef.beta[j] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-feature closed form agrees with brute-force grid search") {
  Rng rng(32);
  const Matrix X = orthonormal_columns(25, 2, rng);
  const Vector y = 2.0 * random_vector(25, rng);
  Vector c(2);
  c << 0.7, 2.5;
  const double lambda = 1.3;
  const Coefficients coef = fit(X, y, CostVector(c), raw_config(lambda, 0.0));
  const Vector grid = oracles::grid_search_2d(X, y, c, lambda, 0.0);
  CHECK(coef.beta[0] == doctest::Approx(grid[0]).epsilon(1e-3));
  CHECK(coef.beta[1] == doctest::Approx(grid[1]).epsilon(1e-3));
}

TEST_CASE("alpha 1 matches the weighted ridge normal equations") {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    const Index n = 10 + static_cast<Index>(rng.below(41));
    const Index p = 1 + static_cast<Index>(rng.below(5));
    const Matrix X = random_matrix(n, p, rng);
    const Vector y = random_vector(n, rng);
    const Vector c = random_costs(p, rng);
    const double lambda = rng.uniform(0.05, 4.0);
    const Coefficients coef = fit(X, y, CostVector(c), raw_config(lambda, 1.0));
    const Vector expected = oracles::ridge_solution(X, y, c, lambda);
    CHECK((coef.beta - expected).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("lambda 0 recovers least squares regardless of costs") {
  Rng rng(34);
  const Matrix X = random_matrix(40, 5, rng);
  const Vector y = random_vector(40, rng);
  const Vector expected = X.colPivHouseholderQr().solve(y);
  const Coefficients coef =
      fit(X, y, CostVector(random_costs(5, rng)), raw_config(0.0, 0.3));
  CHECK((coef.beta - expected).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("unit costs with alpha 0 and 1 are plain lasso and ridge") {
  Rng rng(35);
  for (int t = 0; t < 20; ++t) {
    const Index n = 12 + static_cast<Index>(rng.below(30));
    const Index p = 2 + static_cast<Index>(rng.below(4));
    const Matrix X = random_matrix(n, p, rng);
    const Vector y = random_vector(n, rng);
    const Vector ones = Vector::Ones(p);
    const double lambda = rng.uniform(0.2, 5.0);

    const Coefficients lasso = fit(X, y, CostVector(ones), raw_config(lambda, 0.0));
    const auto lasso_ref =
        oracles::enumerate_elastic_net(X, y, ones, lambda, 0.0);
    REQUIRE(lasso_ref.has_value());
    CHECK((lasso.beta - lasso_ref->first).lpNorm<Eigen::Infinity>() < 1e-6);

    const Coefficients ridge = fit(X, y, CostVector(ones), raw_config(lambda, 1.0));
    const Vector ridge_ref = oracles::ridge_solution(X, y, ones, lambda);
    CHECK((ridge.beta - ridge_ref).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("unit-cost fit matches an independent elastic net, with intercept") {
  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    const Index n = 15 + static_cast<Index>(rng.below(20));
    const Index p = 2 + static_cast<Index>(rng.below(3));
    Matrix X = random_matrix(n, p, rng);
    X.array() += 0.5;  // off-center so the intercept matters
    const Vector y = random_vector(n, rng);
    const Vector ones = Vector::Ones(p);
    const double lambda = rng.uniform(0.2, 3.0);
    const double alpha = rng.uniform(0.0, 1.0);

    SolverConfig cfg = raw_config(lambda, alpha);
    cfg.fit_intercept = true;
    const Coefficients coef = fit(X, y, CostVector(ones), cfg);
    const auto ref = oracles::enumerate_elastic_net(X, y, ones, lambda, alpha,
                                                    /*fit_intercept=*/true);
    REQUIRE(ref.has_value());
    CHECK((coef.beta - ref->first).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(coef.intercept == doctest::Approx(ref->second).epsilon(1e-7));
  }
}

TEST_CASE("weighted fit matches the weighted enumeration oracle") {
  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    const Index n = 20;
    const Index p = 3;
    const Matrix X = random_matrix(n, p, rng);
    const Vector y = random_vector(n, rng);
    const Vector c = random_costs(p, rng);
    Vector w(n);
    for (Index i = 0; i < n; ++i) w[i] = rng.uniform(0.1, 2.0);
    const double lambda = rng.uniform(0.2, 2.0);
    const double alpha = rng.uniform(0.0, 1.0);

    SolverConfig cfg = raw_config(lambda, alpha);
    cfg.fit_intercept = true;
    cfg.sample_weights = w;
    const Coefficients coef = fit(X, y, CostVector(c), cfg);

    // the solver normalizes weights to sum n; the oracle sees them directly
    const Vector w_norm = w * (static_cast<double>(n) / w.sum());
    const auto ref = oracles::enumerate_elastic_net(X, y, c, lambda, alpha,
                                                    /*fit_intercept=*/true, w_norm);
    REQUIRE(ref.has_value());
    CHECK((coef.beta - ref->first).lpNorm<Eigen::Infinity>() < 1e-7);
    CHECK(coef.intercept == doctest::Approx(ref->second).epsilon(1e-6));
  }
}

TEST_CASE("objective trace is non-increasing across sweeps") {
  Rng rng(38);
  for (int t = 0; t < 100; ++t) {
    const Index n = 10 + static_cast<Index>(rng.below(40));
    const Index p = 2 + static_cast<Index>(rng.below(7));
    const Matrix X = random_matrix(n, p, rng);
    const Vector y = random_vector(n, rng);
    SolverConfig cfg;
    cfg.lambda = rng.uniform(0.0, 3.0);
    cfg.alpha = rng.uniform(0.0, 1.0);
    cfg.standardize = rng.bernoulli(0.5);
    cfg.fit_intercept = rng.bernoulli(0.5);
    cfg.record_trace = true;
    if (rng.bernoulli(0.3)) {
      Vector w(n);
      for (Index i = 0; i < n; ++i) w[i] = rng.uniform(0.0, 2.0);
      w[0] = 1.0;
      cfg.sample_weights = w;
    }
    const Coefficients coef =
        fit(X, y, CostVector(random_costs(p, rng)), cfg);
    REQUIRE(coef.objective_trace.size() >= 2);
    for (std::size_t s = 1; s < coef.objective_trace.size(); ++s) {
      const double prev = coef.objective_trace[s - 1];
      const double next = coef.objective_trace[s];
      CHECK(next <= prev + 1e-12 * std::max(1.0, std::abs(prev)));
    }
  }
}

TEST_CASE("objective is convex along random chords") {
  Rng rng(39);
  const Matrix X = random_matrix(25, 6, rng);
  const Vector y = random_vector(25, rng);
  const CostVector costs(random_costs(6, rng));
  SolverConfig cfg;
  cfg.lambda = 1.7;
  cfg.alpha = 0.35;
  for (int t = 0; t < 1000; ++t) {
    const Vector b1 = 3.0 * random_vector(6, rng);
    const Vector b2 = 3.0 * random_vector(6, rng);
    const double u = rng.uniform01();
    const Vector mid = u * b1 + (1.0 - u) * b2;
    const double lhs = objective(X, y, mid, 0.0, costs, cfg);
    const double rhs = u * objective(X, y, b1, 0.0, costs, cfg) +
                       (1.0 - u) * objective(X, y, b2, 0.0, costs, cfg);
    CHECK(lhs <= rhs + 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("raising a feature's cost eventually drives its weight to zero") {
  Rng rng(40);
  const Index n = 40, p = 5;
  const Matrix X = random_matrix(n, p, rng);
  Vector signal = Vector::Zero(p);
  signal << 2.0, -1.5, 1.0, 0.5, -0.7;
  const Vector y = X * signal + 0.1 * random_vector(n, rng);

  for (Index j = 0; j < p; ++j) {
    Vector c = Vector::Ones(p);
    SolverConfig cfg = raw_config(0.5, 0.25);
    cfg.fit_intercept = true;
    bool suppressed = false;
    for (int doubling = 0; doubling < 60; ++doubling) {
      const Coefficients coef = fit(X, y, CostVector(c), cfg);
      if (coef.beta[j] == 0.0) {
        // at the zero point the coordinate optimality condition holds
        Vector r = y - X * coef.beta;
        r.array() -= coef.intercept;
        const double corr = std::abs(X.col(j).dot(r));
        CHECK(corr <=
              0.5 * (1.0 - cfg.alpha) * cfg.lambda * c[j] * (1.0 + 1e-8));
        suppressed = true;
        break;
      }
      c[j] *= 2.0;
    }
    CHECK(suppressed);
  }
}

TEST_CASE("standardized fit equals fitting the rescaled problem directly") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const Index n = 30, p = 4;
    Matrix X = random_matrix(n, p, rng);
    for (Index j = 0; j < p; ++j)
      X.col(j) = X.col(j) * rng.uniform(0.5, 4.0) + Vector::Constant(n, rng.normal());
    const Vector y = random_vector(n, rng);
    const Vector c = random_costs(p, rng);

    SolverConfig std_cfg;
    std_cfg.lambda = 1.1;
    std_cfg.alpha = 0.4;
    std_cfg.standardize = true;
    std_cfg.tolerance = 1e-12;
    const Coefficients standardized = fit(X, y, CostVector(c), std_cfg);

    // build the standardized problem by hand and fit it unscaled
    Matrix Z(n, p);
    Vector mu(p), sd(p);
    for (Index j = 0; j < p; ++j) {
      mu[j] = X.col(j).mean();
      sd[j] = std::sqrt((X.col(j).array() - mu[j]).square().sum() / n);
      Z.col(j) = (X.col(j).array() - mu[j]) / sd[j];
    }
    SolverConfig raw_cfg = std_cfg;
    raw_cfg.standardize = false;
    const Coefficients direct = fit(Z, y, CostVector(c), raw_cfg);

    for (Index j = 0; j < p; ++j)
      CHECK(standardized.beta[j] ==
            doctest::Approx(direct.beta[j] / sd[j]).epsilon(1e-8));
    const double mapped_intercept = direct.intercept - (direct.beta.array() * mu.array() / sd.array()).sum();
    CHECK(standardized.intercept == doctest::Approx(mapped_intercept).epsilon(1e-8));
  }
}

TEST_CASE("zero-variance column is pinned to zero and flagged") {
  Rng rng(42);
  Matrix X = random_matrix(20, 4, rng);
  X.col(2).setConstant(3.25);
  const Vector y = random_vector(20, rng);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  const Coefficients coef = fit(X, y, CostVector::ones(4), cfg);
  CHECK(coef.beta[2] == 0.0);
  REQUIRE(coef.dropped_features.size() == 1);
  CHECK(coef.dropped_features[0] == 2);

  // equivalent to simply removing the column
  Matrix Xr(20, 3);
  Xr << X.col(0), X.col(1), X.col(3);
  const Coefficients reduced = fit(Xr, y, CostVector::ones(3), cfg);
  CHECK(coef.beta[0] == doctest::Approx(reduced.beta[0]).epsilon(1e-9));
  CHECK(coef.beta[1] == doctest::Approx(reduced.beta[1]).epsilon(1e-9));
  CHECK(coef.beta[3] == doctest::Approx(reduced.beta[2]).epsilon(1e-9));
}

TEST_CASE("non-convergence returns the best iterate flagged") {
  Rng rng(43);
  Matrix X = random_matrix(30, 6, rng);
  // strongly correlated columns slow the sweeps down
  for (Index j = 1; j < 6; ++j) X.col(j) = X.col(0) + 0.01 * X.col(j);
  const Vector y = random_vector(30, rng);
  SolverConfig cfg;
  cfg.lambda = 0.01;
  cfg.alpha = 0.0;
  cfg.max_sweeps = 2;
  cfg.tolerance = 1e-14;
  const Coefficients coef = fit(X, y, CostVector::ones(6), cfg);
  CHECK_FALSE(coef.converged);
  CHECK(coef.sweeps_used == 2);
  CHECK(coef.beta.allFinite());
  CHECK(std::isfinite(coef.objective_value));
}

TEST_CASE("fit objective_value matches the public objective formula") {
  Rng rng(44);
  const Matrix X = random_matrix(25, 4, rng);
  const Vector y = random_vector(25, rng);
  const CostVector costs(random_costs(4, rng));
  SolverConfig cfg;
  cfg.lambda = 0.9;
  cfg.alpha = 0.6;
  cfg.standardize = false;
  const Coefficients coef = fit(X, y, costs, cfg);
  const double recomputed =
      objective(X, y, coef.beta, coef.intercept, costs, cfg);
  CHECK(coef.objective_value == doctest::Approx(recomputed).epsilon(1e-12));
}

TEST_CASE("fit rejects invalid configuration") {
  Matrix X(3, 2);
  X << 1, 2, 3, 4, 5, 6;
  Vector y(3);
  y << 1, 0, 1;
  SolverConfig cfg;
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(fit(X, y, CostVector::ones(2), cfg), DataError);
  cfg.alpha = 0.5;
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(fit(X, y, CostVector::ones(2), cfg), DataError);
  cfg.lambda = 1.0;
  cfg.sample_weights = Vector::Zero(3);
  CHECK_THROWS_AS(fit(X, y, CostVector::ones(2), cfg), DataError);
}

}  // TEST_SUITE
