// Copyright 2026 The fairloan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRLOAN_TABULAR_H_
#define FAIRLOAN_TABULAR_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fairloan {

enum class ColumnKind { kFeature, kSensitive, kLabel };

std::string_view ColumnKindName(ColumnKind kind);
absl::StatusOr<ColumnKind> ParseColumnKind(std::string_view name);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kFeature;
  // Admissible values for categorical columns, in code order. Empty for
  // numeric columns.
  std::vector<std::string> domain;

  bool categorical() const { return !domain.empty(); }
  bool operator==(const ColumnSpec&) const = default;
};

// Checks the schema-level invariants: unique names, exactly one label column
// with a two-value domain (code 0 = unfavorable, 1 = favorable), sensitive
// columns categorical with at least two values, duplicate-free domains.
absl::Status ValidateSchema(std::span<const ColumnSpec> schema);

// String cells as read from a CSV file, columns in schema order.
struct RawTable {
  std::vector<ColumnSpec> schema;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> missing_markers;
  std::vector<size_t> missing_counts;  // Per column.

  size_t num_rows() const { return rows.size(); }
  bool IsMissing(std::string_view cell) const;
  bool IsMissing(size_t row, size_t col) const {
    return IsMissing(rows[row][col]);
  }
};

inline const std::vector<std::string>& DefaultMissingMarkers() {
  static const auto* markers =
      new std::vector<std::string>{"", "Exempt", "NA"};
  return *markers;
}

// Reads a CSV with a header row. The header must contain exactly the schema
// names (any order). Cells are reordered into schema order; row order is
// preserved.
absl::StatusOr<RawTable> LoadCsv(
    const std::filesystem::path& path, std::span<const ColumnSpec> schema,
    std::span<const std::string> missing_markers = DefaultMissingMarkers());
absl::StatusOr<RawTable> ParseCsv(
    std::istream& in, std::span<const ColumnSpec> schema,
    std::span<const std::string> missing_markers = DefaultMissingMarkers());

// Drops columns whose missing fraction exceeds `column_missing_threshold`,
// then rows with any missing cell, then rows whose sensitive or label value is
// outside the column's domain. Fails if the label or a sensitive column would
// be dropped, or if no rows survive.
absl::StatusOr<RawTable> Clean(const RawTable& raw,
                               double column_missing_threshold = 0.25);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const MinMax&) const = default;
};

// Immutable, fully numeric table. Columns are in canonical order: sensitive
// columns, then features, then the label as the last column.
//
//   * sensitive cells hold the raw option code (0, 1, 2, ...), unscaled;
//   * categorical feature cells hold code / (domain size - 1);
//   * numeric feature cells hold (x - min) / (max - min), or 0 if min == max;
//   * the label cell is 0 (unfavorable) or 1 (favorable).
class Dataset {
 public:
  Dataset() = default;

  // Validates every invariant listed above. `normalization` has one entry per
  // column, set only for numeric features.
  static absl::StatusOr<Dataset> Create(
      std::vector<ColumnSpec> schema, std::vector<double> values,
      std::vector<std::optional<MinMax>> normalization);

  const std::vector<ColumnSpec>& schema() const { return schema_; }
  const std::vector<std::optional<MinMax>>& normalization() const {
    return normalization_;
  }
  size_t num_rows() const { return num_rows_; }
  size_t num_columns() const { return schema_.size(); }
  size_t num_sensitive() const { return num_sensitive_; }
  // Model inputs: every column except the label.
  size_t num_inputs() const { return schema_.size() - 1; }
  size_t label_column() const { return schema_.size() - 1; }
  std::vector<std::string> input_names() const;

  std::span<const double> row(size_t i) const {
    return {values_.data() + i * schema_.size(), schema_.size()};
  }
  std::span<const double> inputs(size_t i) const {
    return row(i).first(num_inputs());
  }
  int label(size_t i) const {
    return static_cast<int>(values_[i * schema_.size() + label_column()]);
  }
  std::span<const double> values() const { return values_; }

  // Encoding-map lookups for categorical columns.
  absl::StatusOr<int> Encode(size_t column, std::string_view value) const;
  absl::StatusOr<std::string> Decode(size_t column, double cell) const;
  // Cell rendered back into its source representation (category string or
  // de-normalized number).
  absl::StatusOr<std::string> Render(size_t column, double cell) const;

  Dataset Subset(std::span<const size_t> rows) const;
  // Same schema and normalization, new row-major values.
  absl::StatusOr<Dataset> WithValues(std::vector<double> values) const;

 private:
  std::vector<ColumnSpec> schema_;
  std::vector<std::optional<MinMax>> normalization_;
  std::vector<double> values_;
  size_t num_rows_ = 0;
  size_t num_sensitive_ = 0;
};

// Maps categorical cells to codes and min-max scales numeric features.
absl::StatusOr<Dataset> EncodeAndNormalize(const RawTable& raw);

// Writes the dataset with decoded categoricals and de-normalized numerics,
// columns in canonical order.
absl::Status WriteCsv(const Dataset& data, const std::filesystem::path& path);
absl::Status WriteCsv(const Dataset& data, std::ostream& out);

}  // namespace fairloan

#endif  // FAIRLOAN_TABULAR_H_
