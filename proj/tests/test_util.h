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


#ifndef FAIRLOAN_TESTS_TEST_UTIL_H_
#define FAIRLOAN_TESTS_TEST_UTIL_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/random.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"
#include "gtest/gtest.h"

#define FAIRLOAN_CONCAT_INNER(a, b) a##b
#define FAIRLOAN_CONCAT(a, b) FAIRLOAN_CONCAT_INNER(a, b)

#define EXPECT_OK(expr) EXPECT_TRUE((expr).ok()) << (expr).message()
#define ASSERT_OK(expr)                                         \
  do {                                                          \
    const absl::Status fairloan_status = (expr);                \
    ASSERT_TRUE(fairloan_status.ok()) << fairloan_status.message(); \
  } while (0)

#define ASSERT_OK_AND_ASSIGN_IMPL(tmp, lhs, expr)        \
  auto tmp = (expr);                                     \
  ASSERT_TRUE(tmp.ok()) << tmp.status().message();       \
  lhs = *std::move(tmp)
#define ASSERT_OK_AND_ASSIGN(lhs, expr) \
  ASSERT_OK_AND_ASSIGN_IMPL(FAIRLOAN_CONCAT(status_or_, __LINE__), lhs, expr)

namespace fairloan::testing {

inline std::string Msg(const absl::Status& status) {
  return std::string(status.message());
}

inline SensitiveSpec HmdaSpec() {
  return *SensitiveSpec::Create(
      {{"race", {"White", "Black", "Joint"}},
       {"sex", {"Male", "Female", "Joint"}},
       {"ethnicity", {"Non-Hispanic", "Hispanic", "Joint"}}});
}

// Canonical schema: the sensitive columns of `spec`, `n_features` numeric
// features f0.., then a label with domain {denied, originated}.
inline std::vector<ColumnSpec> MakeSchema(const SensitiveSpec& spec,
                                          size_t n_features) {
  std::vector<ColumnSpec> schema;
  for (const SensitiveParameter& p : spec.parameters()) {
    schema.push_back({p.name, ColumnKind::kSensitive, p.options});
  }
  for (size_t j = 0; j < n_features; ++j) {
    schema.push_back({"f" + std::to_string(j), ColumnKind::kFeature, {}});
  }
  schema.push_back({"label", ColumnKind::kLabel, {"denied", "originated"}});
  return schema;
}

// Builds a dataset from canonical rows (sensitive codes, features in [0, 1],
// label). Numeric columns get the identity normalization.
inline Dataset MakeDataset(const SensitiveSpec& spec, size_t n_features,
                           const std::vector<std::vector<double>>& rows) {
  std::vector<ColumnSpec> schema = MakeSchema(spec, n_features);
  std::vector<std::optional<MinMax>> norm(schema.size());
  for (size_t c = 0; c < schema.size(); ++c) {
    if (!schema[c].categorical()) norm[c] = MinMax{0.0, 1.0};
  }
  std::vector<double> values;
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  absl::StatusOr<Dataset> data =
      Dataset::Create(std::move(schema), std::move(values), std::move(norm));
  EXPECT_TRUE(data.ok()) << data.status().message();
  return data.ok() ? *std::move(data) : Dataset();
}

inline std::vector<double> Values(const Dataset& data) {
  return {data.values().begin(), data.values().end()};
}

// Random rows: uniform world, uniform features, label from `label_fn`.
template <typename LabelFn>
std::vector<std::vector<double>> RandomRows(const SensitiveSpec& spec,
                                            size_t n_features, size_t n,
                                            uint64_t seed, LabelFn label_fn) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  rows.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (const SensitiveParameter& p : spec.parameters()) {
      row.push_back(static_cast<double>(rng.UniformIndex(p.options.size())));
    }
    for (size_t j = 0; j < n_features; ++j) row.push_back(rng.Uniform());
    row.push_back(static_cast<double>(label_fn(row, rng)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fairloan::testing

#endif  // FAIRLOAN_TESTS_TEST_UTIL_H_
