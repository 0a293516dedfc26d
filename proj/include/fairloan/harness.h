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

#ifndef FAIRLOAN_HARNESS_H_
#define FAIRLOAN_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/balance.h"
#include "fairloan/fairness.h"
#include "fairloan/model.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"

namespace fairloan {

struct ExperimentConfig {
  double split_fraction = 0.7;  // Train share.
  int repeats = 10;
  uint64_t master_seed = 0;
  bool repair_test = true;  // Balance the test set of the debiased arm.
  SmoteParams smote;
  FitConfig fit;
  // Worker threads (0 = hardware concurrency). Never affects results.
  int threads = 1;

  absl::Status Validate() const;
  // Compares every field that influences results (not `threads`, and not
  // the stage seeds, which are derived from master_seed).
  bool SameExperiment(const ExperimentConfig& other) const;
};

struct TrainTestSplit {
  std::vector<size_t> train;
  std::vector<size_t> test;
};

// Per label, shuffles the row indices and sends round(fraction * count) of
// them to train. Both index lists come back sorted.
TrainTestSplit StratifiedSplit(const Dataset& data, double fraction,
                               uint64_t seed);

// Seed of repeat `repeat` under `master_seed`.
uint64_t RepeatSeed(uint64_t master_seed, int repeat);

struct DebiasResult {
  Dataset data;
  BalanceTargets targets;
  size_t balanced_rows = 0;
  std::vector<size_t> empty_worlds;
  std::vector<size_t> removed_rows;  // Indices into the balanced dataset.
  Dataset balanced;                  // Intermediate, before situation testing.
};

// The repair pipeline: partition, balance every world to the median targets,
// then drop the rows a model trained on the balanced data treats differently
// across worlds.
absl::StatusOr<DebiasResult> Debias(const Dataset& train,
                                    const SensitiveSpec& spec,
                                    const SmoteParams& smote,
                                    const FitConfig& fit, int threads = 1);

struct ArmResult {
  PerformanceMetrics performance;
  AwiScore awi;
  size_t train_rows = 0;
  size_t test_rows = 0;
  bool operator==(const ArmResult&) const = default;
};

struct RepeatResult {
  int repeat = 0;
  uint64_t seed = 0;
  ArmResult before;
  ArmResult after;
  size_t balanced_rows = 0;  // Debiased arm: train rows after balancing.
  size_t removed_rows = 0;   // Debiased arm: rows dropped by situation testing.
  bool operator==(const RepeatResult&) const = default;
};

// One value per reported metric.
struct MetricRow {
  double awi_raw = 0.0;
  double awi_reported = 0.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double false_alarm = 0.0;
  double f1 = 0.0;
  bool operator==(const MetricRow&) const = default;
};

MetricRow ToMetricRow(const ArmResult& arm);

struct FairnessReport {
  ExperimentConfig config;
  std::vector<RepeatResult> repeats;
  MetricRow median_before;
  MetricRow median_after;
};

bool operator==(const FairnessReport& a, const FairnessReport& b);

// Elementwise lower median (sorted[(n - 1) / 2]) of every metric.
MetricRow LowerMedian(const std::vector<MetricRow>& rows);

// Runs one repeat: stratified split, then the untouched baseline arm and the
// debiased arm, both evaluated on their own test sets.
absl::StatusOr<RepeatResult> RunRepeat(const Dataset& data,
                                       const ExperimentConfig& cfg,
                                       const SensitiveSpec& spec, int repeat,
                                       int threads = 1);

// All repeats plus medians. A failing repeat aborts the run and the error
// names the repeat and the stage.
absl::StatusOr<FairnessReport> RunExperiment(const Dataset& data,
                                             const ExperimentConfig& cfg,
                                             const SensitiveSpec& spec);

}  // namespace fairloan

#endif  // FAIRLOAN_HARNESS_H_
