#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "celime/types.hpp"

namespace celime {

enum class Provenance { kInformative, kCombo, kDuplicate, kNoise };

std::string provenance_name(Provenance p);

// Synthetic binary classification problem: a block of informative standard
// normal features carrying the label signal, plus linear combinations,
// exact duplicates, and pure noise columns.
struct ToySpec {
  Index n = 1000;
  Index p = 80;
  Index n_informative = 20;
  Index n_linear_combo = 20;
  Index n_duplicate = 20;
  Index n_noise = 20;
  double label_flip_prob = 0.01;
  // Stretch factor for the signed distance to the labeling hyperplane;
  // 1.0 leaves the informative block exactly standard normal.
  double class_sep = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Dataset {
  Matrix X;
  IntVector y;
  std::vector<std::string> feature_names;
  std::vector<Provenance> provenance;
  // source column index for duplicates, -1 otherwise
  std::vector<Index> duplicate_source;
};

// Labels come from the sign of a random hyperplane over the informative
// block, then label_flip_prob independent flips.  Column layout is
// [informative | combo | duplicate | noise].  If flipping leaves a single
// class the generation is retried with an incremented sub-seed (10 tries).
Dataset generate_toy(const ToySpec& spec);

// i.i.d. Uniform(low, high) costs; an exact draw of zero is bumped to the
// smallest positive step above low so the result is strictly positive.
CostVector sample_costs(Index p, double low = 0.0, double high = 10.0,
                        std::uint64_t seed = 0);

}  // namespace celime
