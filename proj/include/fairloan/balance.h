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

#ifndef FAIRLOAN_BALANCE_H_
#define FAIRLOAN_BALANCE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/random.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"

namespace fairloan {

// Per-world label counts every world is resampled to.
struct BalanceTargets {
  size_t accepted = 0;
  size_t rejected = 0;
  bool operator==(const BalanceTargets&) const = default;
};

// Oversampling hyperparameters. A synthetic value is x1 + f * (x2 - x3), where
// x2, x3 are neighbors of the parent x1; each numeric feature takes the
// mutated value with probability cr and otherwise copies the parent.
struct SmoteParams {
  double f = 0.8;   // Mutation amount.
  double cr = 0.8;  // Crossover frequency.
  int k = 5;        // Neighborhood size.
  uint64_t seed = 0;

  absl::Status Validate() const;
};

// Median (over non-empty worlds) of the accepted and of the rejected counts.
// Even-length medians round half up. Fails when a world would need
// oversampling for a label it has fewer than two rows of.
absl::StatusOr<BalanceTargets> ComputeTargets(const Partition& partition,
                                              const Dataset& data);

// Generates `n_new` synthetic rows from `parents` (row indices into `data`,
// all sharing label and world). Neighbors are the k nearest parents by
// Euclidean distance over the non-sensitive feature columns. Sensitive
// columns, categorical features and the label are copied from the parent.
// Mutated numeric values are clamped to [0, 1].
absl::StatusOr<std::vector<std::vector<double>>> SmoteSample(
    const Dataset& data, std::span<const size_t> parents, size_t n_new,
    const SmoteParams& params);

// Uniform subset of size n_keep without replacement, in draw order.
template <typename T>
absl::StatusOr<std::vector<T>> Undersample(std::span<const T> rows,
                                           size_t n_keep, uint64_t seed) {
  if (n_keep > rows.size()) {
    return absl::InvalidArgumentError("cannot keep more rows than available");
  }
  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  std::vector<T> kept;
  kept.reserve(n_keep);
  for (size_t i = 0; i < n_keep; ++i) {
    const size_t j = i + rng.UniformIndex(order.size() - i);
    std::swap(order[i], order[j]);
    kept.push_back(rows[order[i]]);
  }
  return kept;
}

struct BalanceResult {
  Dataset data;
  BalanceTargets targets;
  // For each output row, the input row it was copied from, or -1 if synthetic.
  std::vector<int64_t> source_rows;
  // Ordinals of worlds with no rows; they stay empty.
  std::vector<size_t> empty_worlds;
};

// Resamples every non-empty world to exactly the targets: labels above target
// are randomly undersampled, labels below are topped up with SmoteSample.
// Each world draws from a seed derived from (params.seed, world key), so the
// output does not depend on `threads`. Output rows are grouped by world in
// ordinal order; within a world, surviving input rows keep their relative
// order and synthetic rows follow.
absl::StatusOr<BalanceResult> BalanceAll(const Dataset& data,
                                         const Partition& partition,
                                         const SmoteParams& params,
                                         int threads = 1);

}  // namespace fairloan

#endif  // FAIRLOAN_BALANCE_H_
