#include "celime/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "celime/io_util.hpp"

namespace celime {

namespace {

constexpr std::size_t kMaxReportMessages = 50;

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last && std::isfinite(out);
}

bool parse_trigger(const std::string& s, int& out) {
  const std::string v = lowercase(s);
  if (v == "0" || v == "false") {
    out = 0;
    return true;
  }
  if (v == "1" || v == "true") {
    out = 1;
    return true;
  }
  return false;
}

}  // namespace

ColumnRole parse_column_role(const std::string& name) {
  const std::string v = lowercase(name);
  if (v == "feature") return ColumnRole::kFeature;
  if (v == "trigger") return ColumnRole::kTrigger;
  if (v == "ignore") return ColumnRole::kIgnore;
  throw DataError("unknown column role: " + name);
}

std::string column_role_name(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature: return "feature";
    case ColumnRole::kTrigger: return "trigger";
    case ColumnRole::kIgnore: return "ignore";
  }
  return "unknown";
}

ColumnRole CsvSchema::role_for(const std::string& column) const {
  const auto it = columns.find(column);
  if (it != columns.end()) return it->second;
  for (const auto& prefix : trigger_prefixes)
    if (column.rfind(prefix, 0) == 0) return ColumnRole::kTrigger;
  return default_role;
}

CsvSchema CsvSchema::default_convention() {
  CsvSchema schema;
  schema.columns["label"] = ColumnRole::kTrigger;
  schema.trigger_prefixes = {"HLT_"};
  schema.default_role = ColumnRole::kFeature;
  return schema;
}

CsvSchema CsvSchema::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open schema file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    CsvSchema schema;
    if (doc.contains("columns"))
      for (const auto& [name, role] : doc.at("columns").items())
        schema.columns[name] = parse_column_role(role.get<std::string>());
    if (doc.contains("trigger_prefixes"))
      schema.trigger_prefixes =
          doc.at("trigger_prefixes").get<std::vector<std::string>>();
    if (doc.contains("default_role"))
      schema.default_role =
          parse_column_role(doc.at("default_role").get<std::string>());
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed schema file " + path.string() + ": " + e.what());
  }
}

std::string LoadReport::to_string() const {
  std::ostringstream out;
  out << "rows_read=" << rows_read << " rows_kept=" << rows_kept
      << " rows_dropped=" << rows_dropped;
  for (const auto& m : messages) out << "\n  " << m;
  return out.str();
}

LoadResult load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  require(in.good(), "cannot open data file: " + path.string());

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "empty file: " + path.string());
  const auto header = split_csv_line(line);

  std::vector<Index> feature_cols, trigger_cols;
  LoadResult result;
  for (std::size_t c = 0; c < header.size(); ++c) {
    switch (schema.role_for(header[c])) {
      case ColumnRole::kFeature:
        feature_cols.push_back(static_cast<Index>(c));
        result.data.feature_names.push_back(header[c]);
        break;
      case ColumnRole::kTrigger:
        trigger_cols.push_back(static_cast<Index>(c));
        result.data.trigger_names.push_back(header[c]);
        break;
      case ColumnRole::kIgnore:
        break;
    }
  }
  require(!trigger_cols.empty(), "schema selects no trigger columns in " + path.string());

  std::vector<std::vector<double>> feature_rows;
  std::vector<std::vector<int>> trigger_rows;
  Index line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    ++result.report.rows_read;
    const auto fields = split_csv_line(line);
    std::string problem;
    if (fields.size() != header.size()) {
      problem = "field count mismatch";
    }
    std::vector<double> fvals(feature_cols.size());
    std::vector<int> tvals(trigger_cols.size());
    if (problem.empty()) {
      for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        const auto& cell = fields[static_cast<std::size_t>(feature_cols[k])];
        if (!parse_double(cell, fvals[k])) {
          problem = "unparseable feature '" + result.data.feature_names[k] +
                    "' value '" + cell + "'";
          break;
        }
      }
    }
    if (problem.empty()) {
      for (std::size_t k = 0; k < trigger_cols.size(); ++k) {
        const auto& cell = fields[static_cast<std::size_t>(trigger_cols[k])];
        if (!parse_trigger(cell, tvals[k])) {
          problem = "unparseable trigger '" + result.data.trigger_names[k] +
                    "' value '" + cell + "'";
          break;
        }
      }
    }
    if (!problem.empty()) {
      ++result.report.rows_dropped;
      if (result.report.messages.size() < kMaxReportMessages)
        result.report.messages.push_back("line " + std::to_string(line_number) +
                                         ": " + problem);
      continue;
    }
    feature_rows.push_back(std::move(fvals));
    trigger_rows.push_back(std::move(tvals));
  }

  result.report.rows_kept = static_cast<Index>(feature_rows.size());
  require(result.report.rows_kept > 0,
          "no usable data rows in " + path.string());

  const Index n = result.report.rows_kept;
  result.data.X.resize(n, static_cast<Index>(feature_cols.size()));
  result.data.trigger_outcomes.resize(n, static_cast<Index>(trigger_cols.size()));
  for (Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < feature_cols.size(); ++k)
      result.data.X(i, static_cast<Index>(k)) = feature_rows[static_cast<std::size_t>(i)][k];
    for (std::size_t k = 0; k < trigger_cols.size(); ++k)
      result.data.trigger_outcomes(i, static_cast<Index>(k)) =
          trigger_rows[static_cast<std::size_t>(i)][k];
  }
  return result;
}

void save_trigger_csv(const std::filesystem::path& path,
                      const TriggerDataset& data) {
  require(static_cast<Index>(data.feature_names.size()) == data.X.cols(),
          "feature name count must match X");
  require(static_cast<Index>(data.trigger_names.size()) ==
              data.trigger_outcomes.cols(),
          "trigger name count must match outcomes");
  require(data.X.rows() == data.trigger_outcomes.rows(),
          "X and trigger outcomes row counts differ");

  std::ostringstream out;
  bool first = true;
  for (const auto& name : data.feature_names) {
    if (!first) out << ',';
    out << name;
    first = false;
  }
  for (const auto& name : data.trigger_names) {
    if (!first) out << ',';
    out << name;
    first = false;
  }
  out << '\n';
  for (Index i = 0; i < data.X.rows(); ++i) {
    for (Index j = 0; j < data.X.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(data.X(i, j));
    }
    for (Index t = 0; t < data.trigger_outcomes.cols(); ++t) {
      if (data.X.cols() > 0 || t > 0) out << ',';
      out << data.trigger_outcomes(i, t);
    }
    out << '\n';
  }
  write_file_atomic(path, out.str());
}

OverlapMode parse_overlap_mode(const std::string& name) {
  const std::string v = lowercase(name);
  if (v == "jaccard") return OverlapMode::kJaccard;
  if (v == "conditional") return OverlapMode::kConditional;
  throw DataError("unknown overlap mode: " + name);
}

OverlapMatrix overlap_matrix(const Eigen::MatrixXi& trigger_outcomes,
                             const std::vector<std::string>& trigger_names,
                             OverlapMode mode) {
  const Index n = trigger_outcomes.rows();
  const Index t = trigger_outcomes.cols();
  require(n >= 1, "need at least one event");
  require(static_cast<Index>(trigger_names.size()) == t,
          "trigger name count must match outcome columns");
  require(((trigger_outcomes.array() == 0) || (trigger_outcomes.array() == 1)).all(),
          "trigger outcomes must be 0/1");

  // pairwise firing-set counts via one integer Gram product
  const Eigen::MatrixXi inter = trigger_outcomes.transpose() * trigger_outcomes;
  OverlapMatrix out;
  out.labels = trigger_names;
  out.values = Matrix::Zero(t, t);
  for (Index a = 0; a < t; ++a)
    if (inter(a, a) == 0) out.inactive.push_back(a);

  for (Index a = 0; a < t; ++a) {
    for (Index b = 0; b < t; ++b) {
      const int na = inter(a, a);
      const int nb = inter(b, b);
      const int nab = inter(a, b);
      if (mode == OverlapMode::kJaccard) {
        const int uni = na + nb - nab;
        out.values(a, b) = uni > 0 ? static_cast<double>(nab) / uni : 0.0;
      } else {
        out.values(a, b) = na > 0 ? static_cast<double>(nab) / na : 0.0;
      }
    }
  }
  return out;
}

std::string overlap_to_csv(const OverlapMatrix& overlap) {
  std::ostringstream out;
  out << "trigger";
  for (const auto& label : overlap.labels) out << ',' << label;
  out << '\n';
  for (Index a = 0; a < overlap.values.rows(); ++a) {
    out << overlap.labels[static_cast<std::size_t>(a)];
    for (Index b = 0; b < overlap.values.cols(); ++b)
      out << ',' << format_double(overlap.values(a, b));
    out << '\n';
  }
  return out.str();
}

CategoryAssignment group_categories(
    const std::vector<std::string>& trigger_names,
    const std::vector<CategoryRule>& rules) {
  require(!rules.empty(), "category rules must be nonempty");
  CategoryAssignment out;
  out.trigger_category.resize(trigger_names.size());

  const auto category_index = [&](const std::string& category) -> Index {
    for (std::size_t k = 0; k < out.categories.size(); ++k)
      if (out.categories[k] == category) return static_cast<Index>(k);
    out.categories.push_back(category);
    return static_cast<Index>(out.categories.size() - 1);
  };

  for (std::size_t i = 0; i < trigger_names.size(); ++i) {
    std::string category = "other";
    for (const auto& rule : rules) {
      if (trigger_names[i].find(rule.pattern) != std::string::npos) {
        category = rule.category;
        break;
      }
    }
    out.trigger_category[i] = category_index(category);
  }
  return out;
}

Eigen::MatrixXi category_outcomes(const Eigen::MatrixXi& trigger_outcomes,
                                  const CategoryAssignment& assignment) {
  require(static_cast<Index>(assignment.trigger_category.size()) ==
              trigger_outcomes.cols(),
          "assignment length must match outcome columns");
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(
      trigger_outcomes.rows(), static_cast<Index>(assignment.categories.size()));
  for (Index t = 0; t < trigger_outcomes.cols(); ++t) {
    const Index c = assignment.trigger_category[static_cast<std::size_t>(t)];
    for (Index i = 0; i < trigger_outcomes.rows(); ++i)
      if (trigger_outcomes(i, t) != 0) out(i, c) = 1;
  }
  return out;
}

std::vector<CategoryRule> category_rules_from_json_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open rules file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
    std::vector<CategoryRule> rules;
    if (doc.is_array()) {
      for (const auto& entry : doc)
        rules.push_back({entry.at("pattern").get<std::string>(),
                         entry.at("category").get<std::string>()});
    } else {
      for (const auto& [pattern, category] : doc.items())
        rules.push_back({pattern, category.get<std::string>()});
    }
    return rules;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed rules file " + path.string() + ": " + e.what());
  }
}

}  // namespace celime
