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

#include "fairloan/fairness.h"


#include <algorithm>
#include <functional>

#include "absl/status/status.h"
#include "fairloan/parallel.h"
#include "text.h"

namespace fairloan {
namespace {

constexpr size_t kProbeBlock = 1024;

// Checks the worlds fit the model's leading sensitive inputs.
absl::Status CheckWorlds(const ClassifierModel& model,
                         std::span<const WorldKey> worlds) {
  if (worlds.empty()) {
    return absl::InvalidArgumentError("empty world list");
  }
  for (const WorldKey& w : worlds) {
    if (w.codes.size() != worlds.front().codes.size() ||
        w.codes.size() > model.weights().size()) {
      return absl::InvalidArgumentError(
          "world keys do not match the model's sensitive inputs");
    }
  }
  return absl::OkStatus();
}

// True when `scratch` (a copy of the row's inputs) predicts differently in
// some world. Restores nothing: the scratch copy is rewritten per world.
bool VariesAcrossWorlds(const ClassifierModel& model, std::span<double> scratch,
                        std::span<const WorldKey> worlds) {
  AssignWorld(scratch, worlds.front());
  const int first = model.LabelFromLogit(model.Logit(scratch));
  for (size_t i = 1; i < worlds.size(); ++i) {
    AssignWorld(scratch, worlds[i]);
    if (model.LabelFromLogit(model.Logit(scratch)) != first) return true;
  }
  return false;
}

}  // namespace

absl::StatusOr<ProbeResult> ProbePoint(const ClassifierModel& model,
                                       std::span<const double> row,
                                       std::span<const WorldKey> worlds) {
  if (absl::Status s = CheckWorlds(model, worlds); !s.ok()) return s;
  if (row.size() < model.weights().size()) {
    return absl::InvalidArgumentError("feature mismatch: row too short");
  }
  std::vector<double> scratch(row.begin(),
                              row.begin() + model.weights().size());
  ProbeResult result;
  result.predictions.reserve(worlds.size());
  for (const WorldKey& w : worlds) {
    AssignWorld(scratch, w);
    result.predictions.push_back(model.LabelFromLogit(model.Logit(scratch)));
  }
  result.is_biased =
      std::adjacent_find(result.predictions.begin(), result.predictions.end(),
                         std::not_equal_to<>()) != result.predictions.end();
  return result;
}

absl::StatusOr<std::vector<size_t>> FindBiasedRows(
    const ClassifierModel& model, const Dataset& data,
    std::span<const WorldKey> worlds, int threads) {
  if (absl::Status s = model.CheckCompatible(data); !s.ok()) return s;
  if (absl::Status s = CheckWorlds(model, worlds); !s.ok()) return s;
  if (worlds.front().codes.size() != data.num_sensitive()) {
    return absl::InvalidArgumentError(
        "world keys do not cover the dataset's sensitive columns");
  }
  const size_t n = data.num_rows();
  std::vector<char> biased(n, 0);
  const size_t blocks = (n + kProbeBlock - 1) / kProbeBlock;
  ParallelFor(blocks, threads, [&](size_t b) {
    std::vector<double> scratch(data.num_inputs());
    const size_t end = std::min(n, (b + 1) * kProbeBlock);
    for (size_t r = b * kProbeBlock; r < end; ++r) {
      const auto inputs = data.inputs(r);
      std::copy(inputs.begin(), inputs.end(), scratch.begin());
      biased[r] = VariesAcrossWorlds(model, scratch, worlds);
    }
  });
  std::vector<size_t> rows;
  for (size_t r = 0; r < n; ++r) {
    if (biased[r]) rows.push_back(r);
  }
  return rows;
}

AwiScore MakeAwiScore(size_t biased_points, size_t total_points) {
  AwiScore s;
  s.biased_points = biased_points;
  s.total_points = total_points;
  s.raw = total_points == 0
              ? 0.0
              : static_cast<double>(biased_points) / total_points;
  s.reported = 10.0 * s.raw;
  return s;
}

absl::StatusOr<AwiScore> ComputeAwi(const ClassifierModel& model,
                                    const Dataset& test,
                                    std::span<const WorldKey> worlds,
                                    int threads) {
  if (test.num_rows() == 0) {
    return absl::FailedPreconditionError("AWI needs a non-empty test set");
  }
  absl::StatusOr<std::vector<size_t>> biased =
      FindBiasedRows(model, test, worlds, threads);
  if (!biased.ok()) return biased.status();
  return MakeAwiScore(biased->size(), test.num_rows());
}

absl::StatusOr<SituationTestResult> SituationTest(const Dataset& train,
                                                  const SensitiveSpec& spec,
                                                  const FitConfig& fit_config,
                                                  int threads) {
  absl::StatusOr<ClassifierModel> model = Fit(train, fit_config, threads);
  if (!model.ok()) return model.status();
  const std::vector<WorldKey> worlds = EnumerateWorlds(spec);
  absl::StatusOr<std::vector<size_t>> biased =
      FindBiasedRows(*model, train, worlds, threads);
  if (!biased.ok()) return biased.status();
  if (biased->size() == train.num_rows()) {
    return absl::FailedPreconditionError(text::StrCat(
        "situation testing flagged all ", train.num_rows(),
        " rows as biased; the probe model depends on sensitive columns only"));
  }
  std::vector<size_t> keep;
  keep.reserve(train.num_rows() - biased->size());
  size_t next = 0;
  for (size_t r = 0; r < train.num_rows(); ++r) {
    if (next < biased->size() && (*biased)[next] == r) {
      ++next;
    } else {
      keep.push_back(r);
    }
  }
  SituationTestResult result;
  result.data = train.Subset(keep);
  result.removed_rows = *std::move(biased);
  result.probe_model = *std::move(model);
  return result;
}

PerformanceMetrics MetricsFromConfusion(const ConfusionCounts& c) {
  PerformanceMetrics m;
  m.confusion = c;
  const double tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
  const double total = tp + fp + tn + fn;
  m.accuracy = total > 0 ? (tp + tn) / total : 0.0;
  m.precision_undefined = tp + fp == 0;
  m.precision = m.precision_undefined ? 0.0 : tp / (tp + fp);
  m.recall_undefined = tp + fn == 0;
  m.recall = m.recall_undefined ? 0.0 : tp / (tp + fn);
  m.false_alarm_undefined = fp + tn == 0;
  m.false_alarm = m.false_alarm_undefined ? 0.0 : fp / (fp + tn);
  m.f1_undefined = m.precision + m.recall == 0;
  m.f1 = m.f1_undefined
             ? 0.0
             : 2 * (m.precision * m.recall) / (m.precision + m.recall);
  return m;
}

absl::StatusOr<PerformanceMetrics> ComputePerformance(
    const ClassifierModel& model, const Dataset& test) {
  absl::StatusOr<std::vector<int>> predicted = model.PredictLabels(test);
  if (!predicted.ok()) return predicted.status();
  ConfusionCounts c;
  for (size_t r = 0; r < test.num_rows(); ++r) {
    const int y = test.label(r);
    const int p = (*predicted)[r];
    if (p == 1) {
      (y == 1 ? c.tp : c.fp)++;
    } else {
      (y == 0 ? c.tn : c.fn)++;
    }
  }
  return MetricsFromConfusion(c);
}

}  // namespace fairloan
