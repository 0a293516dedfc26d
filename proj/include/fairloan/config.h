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

#ifndef FAIRLOAN_CONFIG_H_
#define FAIRLOAN_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairloan/harness.h"
#include "fairloan/synthetic.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"

namespace fairloan {

// Bias knobs for `synth`. Worlds whose `unprivileged_parameter` takes one of
// `unprivileged_options` are unprivileged; the rest are privileged.
struct SyntheticSettings {
  double label_bias_strength = 0.0;
  double noise = 0.05;
  double world_shift = 0.0;
  double privileged_weight = 1.0;
  double unprivileged_weight = 1.0;
  std::string unprivileged_parameter;  // Empty: first sensitive parameter.
  std::vector<std::string> unprivileged_options;  // Empty: all but the first.
};

// Everything a JSON config file can set.
//
//   {
//     "columns": [{"name": "...", "kind": "feature|sensitive|label",
//                  "domain": ["...", ...]}, ...],
//     "sensitive": [{"name": "...", "options": ["...", ...]}, ...],
//     "missing_threshold": 0.25,
//     "missing_markers": ["", "Exempt", "NA"],
//     "seed": 0,                       ("master_seed" is accepted too)
//     "smote": {"f": 0.8, "cr": 0.8, "k": 5},
//     "fit": {"learning_rate": 0.1, "max_epochs": 2000,
//             "tolerance": 1e-8, "l2": 1e-4},
//     "experiment": {"split_fraction": 0.7, "repeats": 10,
//                    "repair_test": true, "threads": 1},
//     "synthetic": {"label_bias_strength": 0.4, "noise": 0.05,
//                   "world_shift": 0.0, "privileged_weight": 4,
//                   "unprivileged_weight": 1,
//                   "unprivileged": {"parameter": "race",
//                                    "options": ["Black", "Joint"]}}
//   }
//
// `sensitive` fixes the order of the sensitive parameters and may supply the
// domains of sensitive columns; when absent, the sensitive columns' own order
// and domains are used.
struct ProjectConfig {
  std::vector<ColumnSpec> columns;  // Sensitive columns in `sensitive` order.
  SensitiveSpec sensitive;
  double missing_threshold = 0.25;
  std::vector<std::string> missing_markers = DefaultMissingMarkers();
  ExperimentConfig experiment;
  SyntheticSettings synthetic;

  // Synthetic generator settings for `rows` rows: sensitive parameters from
  // `sensitive`, numeric features and label from `columns`.
  absl::StatusOr<SyntheticSpec> MakeSyntheticSpec(size_t rows) const;
};

absl::StatusOr<ProjectConfig> ParseConfig(std::string_view json_text);
absl::StatusOr<ProjectConfig> LoadConfig(const std::filesystem::path& path);

}  // namespace fairloan

#endif  // FAIRLOAN_CONFIG_H_
