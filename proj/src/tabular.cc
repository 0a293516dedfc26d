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

#include "fairloan/tabular.h"


#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "fairloan/csv.h"
#include "fmt/printf.h"
#include "text.h"

namespace fairloan {

std::string_view ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kFeature:
      return "feature";
    case ColumnKind::kSensitive:
      return "sensitive";
    case ColumnKind::kLabel:
      return "label";
  }
  return "feature";
}

absl::StatusOr<ColumnKind> ParseColumnKind(std::string_view name) {
  if (name == "feature") return ColumnKind::kFeature;
  if (name == "sensitive") return ColumnKind::kSensitive;
  if (name == "label") return ColumnKind::kLabel;
  return absl::InvalidArgumentError(
      text::StrCat("unknown column kind '", name,
                   "' (expected feature, sensitive or label)"));
}

absl::Status ValidateSchema(std::span<const ColumnSpec> schema) {
  std::set<std::string_view> names;
  int labels = 0;
  for (const ColumnSpec& col : schema) {
    if (col.name.empty()) {
      return absl::InvalidArgumentError("column with empty name");
    }
    if (!names.insert(col.name).second) {
      return absl::InvalidArgumentError(
          text::StrCat("duplicate column '", col.name, "'"));
    }
    std::set<std::string_view> values(col.domain.begin(), col.domain.end());
    if (values.size() != col.domain.size()) {
      return absl::InvalidArgumentError(
          text::StrCat("column '", col.name, "' has a duplicate domain value"));
    }
    switch (col.kind) {
      case ColumnKind::kLabel:
        ++labels;
        if (col.domain.size() != 2) {
          return absl::InvalidArgumentError(text::StrCat(
              "label column '", col.name,
              "' needs a domain of exactly two values [unfavorable, "
              "favorable]"));
        }
        break;
      case ColumnKind::kSensitive:
        if (col.domain.size() < 2) {
          return absl::InvalidArgumentError(text::StrCat(
              "sensitive column '", col.name,
              "' must be categorical with at least two options"));
        }
        break;
      case ColumnKind::kFeature:
        if (col.categorical() && col.domain.size() < 2) {
          return absl::InvalidArgumentError(text::StrCat(
              "categorical feature '", col.name,
              "' needs at least two values"));
        }
        break;
    }
  }
  if (labels != 1) {
    return absl::InvalidArgumentError(text::StrCat(
        "schema must have exactly one label column, found ", labels));
  }
  return absl::OkStatus();
}

bool RawTable::IsMissing(std::string_view cell) const {
  const std::string_view trimmed = text::Trim(cell);
  return std::find(missing_markers.begin(), missing_markers.end(), trimmed) !=
         missing_markers.end();
}

absl::StatusOr<RawTable> ParseCsv(std::istream& in,
                                  std::span<const ColumnSpec> schema,
                                  std::span<const std::string> missing_markers) {
  if (absl::Status s = ValidateSchema(schema); !s.ok()) return s;

  csv::Reader reader(in);
  csv::Record header;
  absl::StatusOr<bool> more = reader.Next(header);
  if (!more.ok()) return more.status();
  if (!*more) return absl::InvalidArgumentError("empty CSV: no header row");
  for (std::string& h : header) h = std::string(text::Trim(h));

  std::map<std::string, size_t> header_pos;
  for (size_t i = 0; i < header.size(); ++i) {
    if (!header_pos.emplace(header[i], i).second) {
      return absl::InvalidArgumentError(
          text::StrCat("header mismatch: duplicate column '", header[i], "'"));
    }
  }
  std::vector<size_t> source(schema.size());
  for (size_t c = 0; c < schema.size(); ++c) {
    auto it = header_pos.find(schema[c].name);
    if (it == header_pos.end()) {
      return absl::InvalidArgumentError(text::StrCat(
          "header mismatch: schema column '", schema[c].name,
          "' not in header"));
    }
    source[c] = it->second;
  }
  if (header.size() != schema.size()) {
    std::vector<std::string> extra;
    for (const auto& [name, pos] : header_pos) {
      if (std::none_of(schema.begin(), schema.end(),
                       [&](const ColumnSpec& c) { return c.name == name; })) {
        extra.push_back(name);
      }
    }
    return absl::InvalidArgumentError(
        text::StrCat("header mismatch: columns not in schema: ",
                     text::Join(extra, ", ")));
  }

  RawTable table;
  table.schema.assign(schema.begin(), schema.end());
  table.missing_markers.assign(missing_markers.begin(), missing_markers.end());
  table.missing_counts.assign(schema.size(), 0);

  csv::Record record;
  size_t row_index = 0;
  while (true) {
    more = reader.Next(record);
    if (!more.ok()) return more.status();
    if (!*more) break;
    if (record.size() == 1 && record[0].empty()) continue;  // Blank line.
    if (record.size() != header.size()) {
      return absl::InvalidArgumentError(fmt::sprintf(
          "ragged row %d (line %d): expected %d cells, got %d", row_index,
          reader.line(), header.size(), record.size()));
    }
    std::vector<std::string> cells(schema.size());
    for (size_t c = 0; c < schema.size(); ++c) {
      cells[c] = std::move(record[source[c]]);
      if (table.IsMissing(cells[c])) ++table.missing_counts[c];
    }
    table.rows.push_back(std::move(cells));
    ++row_index;
  }
  return table;
}

absl::StatusOr<RawTable> LoadCsv(const std::filesystem::path& path,
                                 std::span<const ColumnSpec> schema,
                                 std::span<const std::string> missing_markers) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        text::StrCat("cannot open input file ", path.string()));
  }
  absl::StatusOr<RawTable> table = ParseCsv(in, schema, missing_markers);
  if (!table.ok()) {
    return absl::Status(table.status().code(),
                        text::StrCat(path.string(), ": ",
                                     table.status().message()));
  }
  return table;
}

absl::StatusOr<RawTable> Clean(const RawTable& raw,
                               double column_missing_threshold) {
  if (!(column_missing_threshold >= 0.0 && column_missing_threshold <= 1.0)) {
    return absl::InvalidArgumentError(
        "missing threshold must lie in [0, 1]");
  }
  const size_t n = raw.num_rows();
  std::vector<size_t> keep_cols;
  for (size_t c = 0; c < raw.schema.size(); ++c) {
    const double frac =
        n == 0 ? 0.0 : static_cast<double>(raw.missing_counts[c]) / n;
    if (frac <= column_missing_threshold) {
      keep_cols.push_back(c);
      continue;
    }
    if (raw.schema[c].kind != ColumnKind::kFeature) {
      return absl::FailedPreconditionError(fmt::sprintf(
          "%s column '%s' is %.1f%% missing, above the %.1f%% threshold",
          ColumnKindName(raw.schema[c].kind), raw.schema[c].name, 100 * frac,
          100 * column_missing_threshold));
    }
  }

  RawTable out;
  out.missing_markers = raw.missing_markers;
  for (size_t c : keep_cols) out.schema.push_back(raw.schema[c]);
  out.missing_counts.assign(keep_cols.size(), 0);

  for (const auto& row : raw.rows) {
    bool keep = true;
    for (size_t k = 0; k < keep_cols.size() && keep; ++k) {
      const std::string& cell = row[keep_cols[k]];
      const ColumnSpec& col = out.schema[k];
      if (raw.IsMissing(cell)) {
        keep = false;
      } else if (col.kind != ColumnKind::kFeature) {
        const std::string_view v = text::Trim(cell);
        keep = std::find(col.domain.begin(), col.domain.end(), v) !=
               col.domain.end();
      }
    }
    if (!keep) continue;
    std::vector<std::string> cells;
    cells.reserve(keep_cols.size());
    for (size_t c : keep_cols) cells.push_back(row[c]);
    out.rows.push_back(std::move(cells));
  }
  if (out.rows.empty()) {
    return absl::FailedPreconditionError(
        "cleaning removed every row; input is unusable");
  }
  return out;
}

absl::StatusOr<Dataset> Dataset::Create(
    std::vector<ColumnSpec> schema, std::vector<double> values,
    std::vector<std::optional<MinMax>> normalization) {
  if (absl::Status s = ValidateSchema(schema); !s.ok()) return s;
  const size_t cols = schema.size();
  // Canonical order: sensitive*, feature*, label.
  size_t num_sensitive = 0;
  while (num_sensitive < cols &&
         schema[num_sensitive].kind == ColumnKind::kSensitive) {
    ++num_sensitive;
  }
  for (size_t c = num_sensitive; c + 1 < cols; ++c) {
    if (schema[c].kind != ColumnKind::kFeature) {
      return absl::InvalidArgumentError(
          "columns must be ordered sensitive, features, label");
    }
  }
  if (schema.back().kind != ColumnKind::kLabel) {
    return absl::InvalidArgumentError("label must be the last column");
  }
  if (values.size() % cols != 0) {
    return absl::InvalidArgumentError("value count is not a multiple of width");
  }
  if (normalization.size() != cols) {
    return absl::InvalidArgumentError("normalization map has wrong width");
  }
  for (size_t c = 0; c < cols; ++c) {
    const bool numeric_feature =
        schema[c].kind == ColumnKind::kFeature && !schema[c].categorical();
    if (normalization[c].has_value() != numeric_feature) {
      return absl::InvalidArgumentError(text::StrCat(
          "normalization entry must be set exactly for numeric features (",
          schema[c].name, ")"));
    }
  }

  const size_t rows = values.size() / cols;
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      const double v = values[r * cols + c];
      const ColumnSpec& col = schema[c];
      bool ok = std::isfinite(v);
      if (ok && col.kind != ColumnKind::kFeature) {
        ok = v == std::floor(v) && v >= 0 &&
             v < static_cast<double>(col.domain.size());
      } else if (ok) {
        ok = v >= 0.0 && v <= 1.0;
      }
      if (!ok) {
        return absl::InvalidArgumentError(fmt::sprintf(
            "row %d column '%s': value %g violates the column invariant", r,
            col.name, v));
      }
    }
  }

  Dataset d;
  d.schema_ = std::move(schema);
  d.values_ = std::move(values);
  d.normalization_ = std::move(normalization);
  d.num_rows_ = rows;
  d.num_sensitive_ = num_sensitive;
  return d;
}

std::vector<std::string> Dataset::input_names() const {
  std::vector<std::string> names;
  for (size_t c = 0; c < num_inputs(); ++c) names.push_back(schema_[c].name);
  return names;
}

absl::StatusOr<int> Dataset::Encode(size_t column,
                                    std::string_view value) const {
  const ColumnSpec& col = schema_.at(column);
  const std::string_view v = text::Trim(value);
  auto it = std::find(col.domain.begin(), col.domain.end(), v);
  if (it == col.domain.end()) {
    return absl::InvalidArgumentError(text::StrCat(
        "value '", v, "' not in the domain of column '", col.name, "'"));
  }
  return static_cast<int>(it - col.domain.begin());
}

absl::StatusOr<std::string> Dataset::Decode(size_t column, double cell) const {
  const ColumnSpec& col = schema_.at(column);
  if (!col.categorical()) {
    return absl::InvalidArgumentError(
        text::StrCat("column '", col.name, "' is not categorical"));
  }
  const double scale = col.kind == ColumnKind::kFeature
                           ? static_cast<double>(col.domain.size() - 1)
                           : 1.0;
  const long code = std::lround(cell * scale);
  if (code < 0 || code >= static_cast<long>(col.domain.size())) {
    return absl::OutOfRangeError(
        text::StrCat("code out of range for column '", col.name, "'"));
  }
  return col.domain[code];
}

absl::StatusOr<std::string> Dataset::Render(size_t column, double cell) const {
  if (schema_.at(column).categorical()) return Decode(column, cell);
  const MinMax& mm = *normalization_[column];
  return fmt::sprintf("%.17g", mm.min + cell * (mm.max - mm.min));
}

Dataset Dataset::Subset(std::span<const size_t> rows) const {
  Dataset d;
  d.schema_ = schema_;
  d.normalization_ = normalization_;
  d.num_sensitive_ = num_sensitive_;
  d.num_rows_ = rows.size();
  const size_t cols = schema_.size();
  d.values_.reserve(rows.size() * cols);
  for (size_t r : rows) {
    const auto src = row(r);
    d.values_.insert(d.values_.end(), src.begin(), src.end());
  }
  return d;
}

absl::StatusOr<Dataset> Dataset::WithValues(std::vector<double> values) const {
  return Create(schema_, std::move(values), normalization_);
}

absl::StatusOr<Dataset> EncodeAndNormalize(const RawTable& raw) {
  if (absl::Status s = ValidateSchema(raw.schema); !s.ok()) return s;

  // Canonical column order.
  std::vector<size_t> order;
  for (ColumnKind kind :
       {ColumnKind::kSensitive, ColumnKind::kFeature, ColumnKind::kLabel}) {
    for (size_t c = 0; c < raw.schema.size(); ++c) {
      if (raw.schema[c].kind == kind) order.push_back(c);
    }
  }
  const size_t cols = order.size();
  const size_t rows = raw.num_rows();

  std::vector<ColumnSpec> schema;
  for (size_t c : order) schema.push_back(raw.schema[c]);
  std::vector<std::optional<MinMax>> normalization(cols);
  std::vector<double> values(rows * cols);

  for (size_t k = 0; k < cols; ++k) {
    const ColumnSpec& col = schema[k];
    const size_t src = order[k];
    if (col.categorical()) {
      const double scale = col.kind == ColumnKind::kFeature
                               ? 1.0 / (col.domain.size() - 1)
                               : 1.0;
      for (size_t r = 0; r < rows; ++r) {
        const std::string& cell = raw.rows[r][src];
        if (raw.IsMissing(cell)) {
          return absl::FailedPreconditionError(fmt::sprintf(
              "row %d column '%s' is missing; clean the table first", r,
              col.name));
        }
        const std::string_view v = text::Trim(cell);
        auto it = std::find(col.domain.begin(), col.domain.end(), v);
        if (it == col.domain.end()) {
          return absl::InvalidArgumentError(fmt::sprintf(
              "row %d column '%s': value '%s' not in domain", r, col.name, v));
        }
        values[r * cols + k] = (it - col.domain.begin()) * scale;
      }
      continue;
    }
    MinMax mm{INFINITY, -INFINITY};
    for (size_t r = 0; r < rows; ++r) {
      double v;
      const std::string_view cell =
          text::Trim(raw.rows[r][src]);
      if (!text::ParseDouble(cell, &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(fmt::sprintf(
            "row %d column '%s': cannot parse '%s' as a number", r, col.name,
            cell));
      }
      values[r * cols + k] = v;
      mm.min = std::min(mm.min, v);
      mm.max = std::max(mm.max, v);
    }
    if (rows == 0) mm = {0.0, 0.0};
    const double range = mm.max - mm.min;
    for (size_t r = 0; r < rows; ++r) {
      double& v = values[r * cols + k];
      v = range > 0 ? std::clamp((v - mm.min) / range, 0.0, 1.0) : 0.0;
    }
    normalization[k] = mm;
  }
  return Dataset::Create(std::move(schema), std::move(values),
                         std::move(normalization));
}

absl::Status WriteCsv(const Dataset& data, std::ostream& out) {
  csv::Record record;
  for (const ColumnSpec& col : data.schema()) record.push_back(col.name);
  csv::WriteRecord(out, record);
  for (size_t r = 0; r < data.num_rows(); ++r) {
    const auto row = data.row(r);
    record.clear();
    for (size_t c = 0; c < data.num_columns(); ++c) {
      absl::StatusOr<std::string> cell = data.Render(c, row[c]);
      if (!cell.ok()) return cell.status();
      record.push_back(*std::move(cell));
    }
    csv::WriteRecord(out, record);
  }
  if (!out) return absl::InternalError("write failed");
  return absl::OkStatus();
}

absl::Status WriteCsv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        text::StrCat("cannot open ", path.string(), " for writing"));
  }
  return WriteCsv(data, out);
}

}  // namespace fairloan
