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

#ifndef FAIRLOAN_FAIRNESS_H_
#define FAIRLOAN_FAIRNESS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "fairloan/model.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"

namespace fairloan {

// Predictions for one row under every counterfactual world.
struct ProbeResult {
  size_t row_index = 0;
  std::vector<int> predictions;  // One per world, in the order probed.
  bool is_biased = false;        // Predictions are not all equal.
};

// Moves `row` through every world in `worlds` and records the model's label
// for each. The caller's row is never modified.
absl::StatusOr<ProbeResult> ProbePoint(const ClassifierModel& model,
                                       std::span<const double> row,
                                       std::span<const WorldKey> worlds);

// Indices (ascending) of the rows of `data` whose prediction varies across
// `worlds`.
absl::StatusOr<std::vector<size_t>> FindBiasedRows(
    const ClassifierModel& model, const Dataset& data,
    std::span<const WorldKey> worlds, int threads = 1);

// Alternate world index: fraction of rows whose prediction is not
// world-invariant. `reported` is 10x `raw` and exists only for display.
struct AwiScore {
  size_t biased_points = 0;
  size_t total_points = 0;
  double raw = 0.0;
  double reported = 0.0;
  bool operator==(const AwiScore&) const = default;
};

AwiScore MakeAwiScore(size_t biased_points, size_t total_points);

absl::StatusOr<AwiScore> ComputeAwi(const ClassifierModel& model,
                                    const Dataset& test,
                                    std::span<const WorldKey> worlds,
                                    int threads = 1);

struct SituationTestResult {
  Dataset data;                       // Input minus the biased rows.
  std::vector<size_t> removed_rows;   // Ascending indices into the input.
  ClassifierModel probe_model;
};

// Fits a model on `train`, probes every training row over all worlds of
// `spec` and drops the biased ones. Fails if nothing would remain.
absl::StatusOr<SituationTestResult> SituationTest(const Dataset& train,
                                                  const SensitiveSpec& spec,
                                                  const FitConfig& fit_config,
                                                  int threads = 1);

struct ConfusionCounts {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;
  bool operator==(const ConfusionCounts&) const = default;
};

// Ratios with a zero denominator are reported as 0 and flagged.
struct PerformanceMetrics {
  ConfusionCounts confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double false_alarm = 0.0;
  double f1 = 0.0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool false_alarm_undefined = false;
  bool f1_undefined = false;
  bool operator==(const PerformanceMetrics&) const = default;
};

// accuracy = (TP+TN)/(TP+FP+TN+FN), precision = TP/(TP+FP),
// recall = TP/(TP+FN), false alarm = FP/(FP+TN),
// F1 = 2 * precision * recall / (precision + recall).
PerformanceMetrics MetricsFromConfusion(const ConfusionCounts& counts);

absl::StatusOr<PerformanceMetrics> ComputePerformance(
    const ClassifierModel& model, const Dataset& test);

}  // namespace fairloan

#endif  // FAIRLOAN_FAIRNESS_H_
