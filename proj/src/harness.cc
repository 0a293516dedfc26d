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

#include "fairloan/harness.h"


#include <algorithm>
#include <cmath>
#include <string_view>

#include "fairloan/parallel.h"
#include "fairloan/random.h"
#include "text.h"

namespace fairloan {
namespace {

absl::Status Annotate(const absl::Status& status, std::string_view context) {
  return absl::Status(status.code(),
                      text::StrCat(context, ": ", status.message()));
}

absl::StatusOr<ArmResult> EvaluateArm(const ClassifierModel& model,
                                      const Dataset& train, const Dataset& test,
                                      std::span<const WorldKey> worlds,
                                      int threads) {
  ArmResult arm;
  arm.train_rows = train.num_rows();
  arm.test_rows = test.num_rows();
  absl::StatusOr<PerformanceMetrics> perf = ComputePerformance(model, test);
  if (!perf.ok()) return perf.status();
  arm.performance = *perf;
  absl::StatusOr<AwiScore> awi = ComputeAwi(model, test, worlds, threads);
  if (!awi.ok()) return awi.status();
  arm.awi = *awi;
  return arm;
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    return absl::InvalidArgumentError("split_fraction must lie in (0, 1)");
  }
  if (repeats < 1) return absl::InvalidArgumentError("repeats must be >= 1");
  if (threads < 0) return absl::InvalidArgumentError("threads must be >= 0");
  if (absl::Status s = smote.Validate(); !s.ok()) return s;
  return fit.Validate();
}

bool ExperimentConfig::SameExperiment(const ExperimentConfig& o) const {
  return split_fraction == o.split_fraction && repeats == o.repeats &&
         master_seed == o.master_seed && repair_test == o.repair_test &&
         smote.f == o.smote.f && smote.cr == o.smote.cr &&
         smote.k == o.smote.k && fit.learning_rate == o.fit.learning_rate &&
         fit.max_epochs == o.fit.max_epochs &&
         fit.tolerance == o.fit.tolerance && fit.l2 == o.fit.l2;
}

TrainTestSplit StratifiedSplit(const Dataset& data, double fraction,
                               uint64_t seed) {
  TrainTestSplit split;
  for (int label : {0, 1}) {
    std::vector<size_t> rows;
    for (size_t r = 0; r < data.num_rows(); ++r) {
      if (data.label(r) == label) rows.push_back(r);
    }
    Rng rng(DeriveSeed(seed, {static_cast<uint64_t>(label)}));
    for (size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[rng.UniformIndex(i)]);
    }
    const size_t n_train =
        static_cast<size_t>(std::llround(fraction * rows.size()));
    split.train.insert(split.train.end(), rows.begin(),
                       rows.begin() + n_train);
    split.test.insert(split.test.end(), rows.begin() + n_train, rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

uint64_t RepeatSeed(uint64_t master_seed, int repeat) {
  return DeriveSeed(master_seed, {static_cast<uint64_t>(repeat)});
}

absl::StatusOr<DebiasResult> Debias(const Dataset& train,
                                    const SensitiveSpec& spec,
                                    const SmoteParams& smote,
                                    const FitConfig& fit, int threads) {
  absl::StatusOr<Partition> partition = PartitionByWorld(train, spec);
  if (!partition.ok()) return Annotate(partition.status(), "partition");
  absl::StatusOr<BalanceResult> balanced =
      BalanceAll(train, *partition, smote, threads);
  if (!balanced.ok()) return Annotate(balanced.status(), "balance");
  absl::StatusOr<SituationTestResult> tested =
      SituationTest(balanced->data, spec, fit, threads);
  if (!tested.ok()) return Annotate(tested.status(), "situation-test");

  DebiasResult result;
  result.targets = balanced->targets;
  result.balanced_rows = balanced->data.num_rows();
  result.empty_worlds = std::move(balanced->empty_worlds);
  result.removed_rows = std::move(tested->removed_rows);
  result.data = std::move(tested->data);
  result.balanced = std::move(balanced->data);
  return result;
}

MetricRow ToMetricRow(const ArmResult& arm) {
  const PerformanceMetrics& p = arm.performance;
  return {arm.awi.raw, arm.awi.reported, p.accuracy,   p.precision,
          p.recall,    p.false_alarm,    p.f1};
}

bool operator==(const FairnessReport& a, const FairnessReport& b) {
  return a.config.SameExperiment(b.config) && a.repeats == b.repeats &&
         a.median_before == b.median_before && a.median_after == b.median_after;
}

MetricRow LowerMedian(const std::vector<MetricRow>& rows) {
  MetricRow out;
  if (rows.empty()) return out;
  auto median_of = [&](double MetricRow::*field) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const MetricRow& r : rows) v.push_back(r.*field);
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
  };
  for (double MetricRow::*field :
       {&MetricRow::awi_raw, &MetricRow::awi_reported, &MetricRow::accuracy,
        &MetricRow::precision, &MetricRow::recall, &MetricRow::false_alarm,
        &MetricRow::f1}) {
    out.*field = median_of(field);
  }
  return out;
}

absl::StatusOr<RepeatResult> RunRepeat(const Dataset& data,
                                       const ExperimentConfig& cfg,
                                       const SensitiveSpec& spec, int repeat,
                                       int threads) {
  RepeatResult result;
  result.repeat = repeat;
  result.seed = RepeatSeed(cfg.master_seed, repeat);
  const std::vector<WorldKey> worlds = EnumerateWorlds(spec);

  const TrainTestSplit split =
      StratifiedSplit(data, cfg.split_fraction, DeriveSeed(result.seed, {0}));
  const Dataset train = data.Subset(split.train);
  const Dataset test = data.Subset(split.test);
  if (train.num_rows() == 0 || test.num_rows() == 0) {
    return absl::FailedPreconditionError(
        "split: too few rows for a train/test split");
  }

  // Baseline arm on untouched data.
  absl::StatusOr<ClassifierModel> baseline = Fit(train, cfg.fit, threads);
  if (!baseline.ok()) return Annotate(baseline.status(), "fit-before");
  absl::StatusOr<ArmResult> before =
      EvaluateArm(*baseline, train, test, worlds, threads);
  if (!before.ok()) return Annotate(before.status(), "evaluate-before");
  result.before = *before;

  // Debiased arm: balancing strictly precedes situation testing.
  SmoteParams smote = cfg.smote;
  smote.seed = DeriveSeed(result.seed, {1});
  absl::StatusOr<DebiasResult> repaired =
      Debias(train, spec, smote, cfg.fit, threads);
  if (!repaired.ok()) return repaired.status();
  result.balanced_rows = repaired->balanced_rows;
  result.removed_rows = repaired->removed_rows.size();

  absl::StatusOr<ClassifierModel> debiased =
      Fit(repaired->data, cfg.fit, threads);
  if (!debiased.ok()) return Annotate(debiased.status(), "fit-after");

  Dataset test_after = test;
  if (cfg.repair_test) {
    // Targets come from the test partition alone.
    absl::StatusOr<Partition> test_partition = PartitionByWorld(test, spec);
    if (!test_partition.ok()) {
      return Annotate(test_partition.status(), "repair-test");
    }
    SmoteParams test_smote = cfg.smote;
    test_smote.seed = DeriveSeed(result.seed, {2});
    absl::StatusOr<BalanceResult> balanced_test =
        BalanceAll(test, *test_partition, test_smote, threads);
    if (!balanced_test.ok()) {
      return Annotate(balanced_test.status(), "repair-test");
    }
    test_after = std::move(balanced_test->data);
  }
  absl::StatusOr<ArmResult> after =
      EvaluateArm(*debiased, repaired->data, test_after, worlds, threads);
  if (!after.ok()) return Annotate(after.status(), "evaluate-after");
  result.after = *after;
  return result;
}

absl::StatusOr<FairnessReport> RunExperiment(const Dataset& data,
                                             const ExperimentConfig& cfg,
                                             const SensitiveSpec& spec) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  const int threads = ResolveThreads(cfg.threads);
  const size_t repeats = static_cast<size_t>(cfg.repeats);
  // Outer parallelism over repeats; leftover workers go to the stages.
  const int outer = std::min<int>(threads, cfg.repeats);
  const int inner = std::max(1, threads / std::max(outer, 1));

  std::vector<absl::StatusOr<RepeatResult>> results(
      repeats, absl::UnknownError("repeat not run"));
  ParallelFor(repeats, outer, [&](size_t r) {
    results[r] = RunRepeat(data, cfg, spec, static_cast<int>(r), inner);
  });

  FairnessReport report;
  report.config = cfg;
  std::vector<MetricRow> before;
  std::vector<MetricRow> after;
  for (size_t r = 0; r < repeats; ++r) {
    if (!results[r].ok()) {
      return Annotate(results[r].status(), text::StrCat("repeat ", r));
    }
    report.repeats.push_back(*results[r]);
    before.push_back(ToMetricRow(results[r]->before));
    after.push_back(ToMetricRow(results[r]->after));
  }
  report.median_before = LowerMedian(before);
  report.median_after = LowerMedian(after);
  return report;
}

}  // namespace fairloan
