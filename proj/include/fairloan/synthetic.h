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

#ifndef FAIRLOAN_SYNTHETIC_H_
#define FAIRLOAN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"

namespace fairloan {

// Generator for loan-like data with controllable selection and label bias.
//
// Each row picks a world with probability proportional to selection_skew,
// draws its features from that world's Gaussian (clamped to [0, 1]) and gets
// a fair label from a fixed linear rule on the features plus noise. In
// unprivileged worlds a favorable fair label is then flipped to unfavorable
// with probability label_bias_strength.
struct SyntheticSpec {
  size_t n_rows = 10000;
  SensitiveSpec spec;
  size_t n_features = 4;
  std::vector<std::string> feature_names;  // Defaults to x0, x1, ...
  std::string label_name = "label";
  std::vector<std::string> label_domain = {"denied", "originated"};
  std::vector<double> selection_skew;  // One weight per world; empty = uniform.
  std::vector<bool> unprivileged;      // One flag per world; empty = none.
  double label_bias_strength = 0.0;
  double noise = 0.05;
  // Spread of the per-world feature means around 0.5. At 0 every world
  // shares one feature distribution.
  double world_shift = 0.0;

  absl::Status Validate() const;
};

// Coefficients of the fair labelling rule: 1, 1/2, 1/3, ...
std::vector<double> FairRuleCoefficients(size_t n_features);

// Flags the worlds whose `parameter` takes one of `option_codes`.
std::vector<bool> WorldsWithOptions(const SensitiveSpec& spec, size_t parameter,
                                    std::span<const int> option_codes);

// Per-world weights: `privileged_weight` for unflagged worlds, and
// `unprivileged_weight` for flagged ones.
std::vector<double> SkewByPrivilege(const std::vector<bool>& unprivileged,
                                    double privileged_weight,
                                    double unprivileged_weight);

absl::StatusOr<Dataset> GenerateSynthetic(const SyntheticSpec& spec,
                                          uint64_t seed);

}  // namespace fairloan

#endif  // FAIRLOAN_SYNTHETIC_H_
