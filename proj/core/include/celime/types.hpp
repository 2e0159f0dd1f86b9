#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace celime {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

// Malformed or inconsistent input data (bad shapes, non-finite values,
// unreadable files, invalid configuration).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed in a way that cannot be expressed as a
// degraded result (e.g. a singular system where a solve is mandatory).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DataError(msg);
}

inline void require_finite(const Matrix& m, const std::string& name) {
  if (!m.allFinite()) throw DataError(name + " contains non-finite entries");
}

inline void require_finite(const Vector& v, const std::string& name) {
  if (!v.allFinite()) throw DataError(name + " contains non-finite entries");
}

// Per-feature acquisition cost c(f_i).  Every entry must be strictly
// positive and finite.
struct CostVector {
  Vector costs;

  CostVector() = default;
  explicit CostVector(Vector c) : costs(std::move(c)) { validate(); }

  static CostVector ones(Index p) { return CostVector(Vector::Ones(p)); }

  Index size() const { return costs.size(); }
  double operator[](Index i) const { return costs[i]; }

  void validate() const {
    require_finite(costs, "cost vector");
    require((costs.array() > 0.0).all(),
            "cost vector entries must be strictly positive");
  }
};

}  // namespace celime
