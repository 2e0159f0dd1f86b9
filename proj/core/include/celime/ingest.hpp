#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "celime/types.hpp"

namespace celime {

enum class ColumnRole { kFeature, kTrigger, kIgnore };

ColumnRole parse_column_role(const std::string& name);
std::string column_role_name(ColumnRole role);

// Maps CSV columns to roles.  Resolution order: explicit entry, then
// trigger prefix match, then default_role.
struct CsvSchema {
  std::map<std::string, ColumnRole> columns;
  std::vector<std::string> trigger_prefixes;
  ColumnRole default_role = ColumnRole::kFeature;

  ColumnRole role_for(const std::string& column) const;

  // Built-in convention when no schema file is given: a column named
  // "label" or prefixed "HLT_" is a trigger, everything else a feature.
  static CsvSchema default_convention();
  static CsvSchema from_json_file(const std::filesystem::path& path);
};

// Event rows with physics-style features plus boolean trigger outcomes.
struct TriggerDataset {
  Matrix X;
  Eigen::MatrixXi trigger_outcomes;  // n x |T|, entries in {0, 1}
  std::vector<std::string> trigger_names;
  std::vector<std::string> feature_names;
};

struct LoadReport {
  Index rows_read = 0;
  Index rows_kept = 0;
  Index rows_dropped = 0;
  std::vector<std::string> messages;  // one per dropped row, capped

  std::string to_string() const;
};

struct LoadResult {
  TriggerDataset data;
  LoadReport report;
};

// Comma-separated, first row header, '.' decimal separator; trigger cells
// accept {0, 1, true, false} case-insensitive.  Rows with unparseable
// cells are dropped and counted in the report.
LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema);

// Inverse of load_csv under the identity schema: features first, then
// trigger columns.  Values round-trip exactly.
void save_trigger_csv(const std::filesystem::path& path,
                      const TriggerDataset& data);

enum class OverlapMode { kJaccard, kConditional };

OverlapMode parse_overlap_mode(const std::string& name);

struct OverlapMatrix {
  Matrix values;  // |T| x |T|, entries in [0, 1]
  std::vector<std::string> labels;
  // triggers firing on zero events: all-zero row/column, diagonal 0
  std::vector<Index> inactive;
};

// jaccard: |A n B| / |A u B| over firing-event sets (symmetric, diagonal 1
// for active triggers); conditional: |A n B| / |A| (row-normalized,
// asymmetric).
OverlapMatrix overlap_matrix(const Eigen::MatrixXi& trigger_outcomes,
                             const std::vector<std::string>& trigger_names,
                             OverlapMode mode);

std::string overlap_to_csv(const OverlapMatrix& overlap);

// First matching rule wins; a rule matches when the trigger name contains
// its pattern.  Unmatched names fall into "other".
struct CategoryRule {
  std::string pattern;
  std::string category;
};

struct CategoryAssignment {
  std::vector<std::string> categories;
  std::vector<Index> trigger_category;  // per trigger, index into categories
};

CategoryAssignment group_categories(
    const std::vector<std::string>& trigger_names,
    const std::vector<CategoryRule>& rules);

// A category fires on an event iff any member trigger fires.
Eigen::MatrixXi category_outcomes(const Eigen::MatrixXi& trigger_outcomes,
                                  const CategoryAssignment& assignment);

std::vector<CategoryRule> category_rules_from_json_file(
    const std::filesystem::path& path);

}  // namespace celime
