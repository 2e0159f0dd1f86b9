#include "celime/datagen.hpp"

#include <cmath>

#include "celime/rng.hpp"

namespace celime {

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kInformative: return "informative";
    case Provenance::kCombo: return "combo";
    case Provenance::kDuplicate: return "duplicate";
    case Provenance::kNoise: return "noise";
  }
  return "unknown";
}

void ToySpec::validate() const {
  require(n >= 1, "n must be >= 1");
  require(p >= 1, "p must be >= 1");
  require(n_informative >= 1, "need at least one informative feature");
  require(n_linear_combo >= 0 && n_duplicate >= 0 && n_noise >= 0,
          "feature counts must be nonnegative");
  require(n_informative + n_linear_combo + n_duplicate + n_noise == p,
          "informative + combo + duplicate + noise counts must equal p");
  require(label_flip_prob >= 0.0 && label_flip_prob < 1.0,
          "label_flip_prob must lie in [0, 1)");
  require(class_sep > 0.0 && std::isfinite(class_sep),
          "class_sep must be positive");
}

namespace {

bool try_generate(const ToySpec& spec, std::uint64_t attempt_seed,
                  Dataset& out) {
  Rng rng(attempt_seed);
  const Index n = spec.n;
  const Index ni = spec.n_informative;

  Matrix informative(n, ni);
  for (Index j = 0; j < ni; ++j)
    for (Index i = 0; i < n; ++i) informative(i, j) = rng.normal();

  Vector direction(ni);
  for (Index j = 0; j < ni; ++j) direction[j] = rng.normal();
  direction.normalize();

  const Vector margin = informative * direction;
  IntVector y(n);
  for (Index i = 0; i < n; ++i) y[i] = margin[i] >= 0.0 ? 1 : 0;
  // stretch the signed distance to the hyperplane by class_sep
  if (spec.class_sep != 1.0)
    informative.noalias() += (spec.class_sep - 1.0) * margin * direction.transpose();

  for (Index i = 0; i < n; ++i)
    if (rng.bernoulli(spec.label_flip_prob)) y[i] = 1 - y[i];

  const int positives = y.sum();
  if (positives == 0 || positives == n) return false;

  Matrix X(n, spec.p);
  std::vector<std::string> names(static_cast<std::size_t>(spec.p));
  std::vector<Provenance> prov(static_cast<std::size_t>(spec.p));
  std::vector<Index> dup_src(static_cast<std::size_t>(spec.p), -1);

  Index col = 0;
  for (Index j = 0; j < ni; ++j, ++col) {
    X.col(col) = informative.col(j);
    names[col] = "inf_" + std::to_string(j);
    prov[col] = Provenance::kInformative;
  }
  for (Index j = 0; j < spec.n_linear_combo; ++j, ++col) {
    Vector coeffs(ni);
    for (Index k = 0; k < ni; ++k) coeffs[k] = rng.normal();
    X.col(col) = informative * coeffs;
    names[col] = "combo_" + std::to_string(j);
    prov[col] = Provenance::kCombo;
  }
  const Index dup_pool = ni + spec.n_linear_combo;
  for (Index j = 0; j < spec.n_duplicate; ++j, ++col) {
    const Index src = static_cast<Index>(rng.below(static_cast<std::uint64_t>(dup_pool)));
    X.col(col) = X.col(src);
    names[col] = "dup_" + std::to_string(j);
    prov[col] = Provenance::kDuplicate;
    dup_src[col] = src;
  }
  for (Index j = 0; j < spec.n_noise; ++j, ++col) {
    for (Index i = 0; i < n; ++i) X(i, col) = rng.normal();
    names[col] = "noise_" + std::to_string(j);
    prov[col] = Provenance::kNoise;
  }

  out.X = std::move(X);
  out.y = std::move(y);
  out.feature_names = std::move(names);
  out.provenance = std::move(prov);
  out.duplicate_source = std::move(dup_src);
  return true;
}

}  // namespace

Dataset generate_toy(const ToySpec& spec) {
  spec.validate();
  Dataset out;
  for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
    if (try_generate(spec, derive_seed(spec.seed, "toy-attempt", attempt), out))
      return out;
  }
  throw DataError("toy generation produced a single class in 10 attempts");
}

CostVector sample_costs(Index p, double low, double high, std::uint64_t seed) {
  require(p >= 1, "p must be >= 1");
  require(low >= 0.0 && low < high && std::isfinite(high),
          "need 0 <= low < high");
  Rng rng(derive_seed(seed, "costs"));
  Vector costs(p);
  for (Index j = 0; j < p; ++j) {
    double v = rng.uniform(low, high);
    if (v <= 0.0) v = std::nextafter(low, high);
    costs[j] = v;
  }
  return CostVector(std::move(costs));
}

}  // namespace celime
