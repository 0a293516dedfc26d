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

#include "fairloan/balance.h"


#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "fairloan/parallel.h"
#include "fmt/printf.h"
#include "text.h"

namespace fairloan {
namespace {

size_t MedianHalfUp(std::vector<size_t> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2] + 1) / 2;
}

struct LabelSplit {
  std::vector<size_t> rejected;
  std::vector<size_t> accepted;
};

LabelSplit SplitByLabel(const Dataset& data, std::span<const size_t> rows) {
  LabelSplit split;
  for (size_t r : rows) {
    (data.label(r) == 1 ? split.accepted : split.rejected).push_back(r);
  }
  return split;
}

// Rows drawn for one label of one world: surviving originals plus synthetics.
struct LabelDraw {
  std::vector<size_t> kept;
  std::vector<std::vector<double>> synthetic;
};

absl::StatusOr<LabelDraw> ResampleLabel(const Dataset& data,
                                        std::span<const size_t> rows,
                                        size_t target,
                                        const SmoteParams& params,
                                        uint64_t seed) {
  LabelDraw draw;
  if (rows.size() >= target) {
    absl::StatusOr<std::vector<size_t>> kept =
        Undersample(rows, target, seed);
    if (!kept.ok()) return kept.status();
    draw.kept = *std::move(kept);
    std::sort(draw.kept.begin(), draw.kept.end());
    return draw;
  }
  draw.kept.assign(rows.begin(), rows.end());
  SmoteParams local = params;
  local.seed = seed;
  absl::StatusOr<std::vector<std::vector<double>>> synthetic =
      SmoteSample(data, rows, target - rows.size(), local);
  if (!synthetic.ok()) return synthetic.status();
  draw.synthetic = *std::move(synthetic);
  return draw;
}

}  // namespace

absl::Status SmoteParams::Validate() const {
  if (!(f >= 0.0 && f <= 1.0)) {
    return absl::InvalidArgumentError("smote.f must lie in [0, 1]");
  }
  if (!(cr >= 0.0 && cr <= 1.0)) {
    return absl::InvalidArgumentError("smote.cr must lie in [0, 1]");
  }
  if (k < 1) return absl::InvalidArgumentError("smote.k must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<BalanceTargets> ComputeTargets(const Partition& partition,
                                              const Dataset& data) {
  std::vector<size_t> accepted;
  std::vector<size_t> rejected;
  std::vector<size_t> nonempty;
  for (size_t w = 0; w < partition.num_worlds(); ++w) {
    const auto& rows = partition.rows(w);
    if (rows.empty()) continue;
    size_t a = 0;
    for (size_t r : rows) a += data.label(r) == 1;
    accepted.push_back(a);
    rejected.push_back(rows.size() - a);
    nonempty.push_back(w);
  }
  if (nonempty.empty()) {
    return absl::FailedPreconditionError("every world is empty");
  }
  BalanceTargets targets{MedianHalfUp(accepted), MedianHalfUp(rejected)};
  if (targets.accepted == 0 || targets.rejected == 0) {
    return absl::FailedPreconditionError(fmt::sprintf(
        "median target is zero (accepted=%d, rejected=%d); most worlds lack "
        "one of the labels",
        targets.accepted, targets.rejected));
  }
  for (size_t i = 0; i < nonempty.size(); ++i) {
    for (auto [count, target, label] :
         {std::tuple{accepted[i], targets.accepted, "accepted"},
          std::tuple{rejected[i], targets.rejected, "rejected"}}) {
      if (count < target && count < 2) {
        return absl::FailedPreconditionError(fmt::sprintf(
            "world #%d has %d %s row(s); oversampling to %d needs at least 2",
            nonempty[i], count, label, target));
      }
    }
  }
  return targets;
}

absl::StatusOr<std::vector<std::vector<double>>> SmoteSample(
    const Dataset& data, std::span<const size_t> parents, size_t n_new,
    const SmoteParams& params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (parents.size() < 2) {
    return absl::FailedPreconditionError(text::StrCat(
        "oversampling needs at least 2 parent rows, got ", parents.size()));
  }
  const size_t first_feature = data.num_sensitive();
  const size_t end_feature = data.label_column();
  std::vector<size_t> numeric;
  for (size_t c = first_feature; c < end_feature; ++c) {
    if (!data.schema()[c].categorical()) numeric.push_back(c);
  }

  const size_t n = parents.size();
  const size_t k = std::min(static_cast<size_t>(params.k), n - 1);
  std::vector<std::optional<std::vector<size_t>>> neighbor_cache(n);
  auto neighbors = [&](size_t p) -> const std::vector<size_t>& {
    if (neighbor_cache[p]) return *neighbor_cache[p];
    const auto x = data.row(parents[p]);
    std::vector<std::pair<double, size_t>> dist;
    dist.reserve(n - 1);
    for (size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      const auto y = data.row(parents[q]);
      double d2 = 0.0;
      for (size_t c = first_feature; c < end_feature; ++c) {
        const double diff = x[c] - y[c];
        d2 += diff * diff;
      }
      dist.emplace_back(d2, q);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    std::vector<size_t> nearest;
    for (size_t i = 0; i < k; ++i) nearest.push_back(dist[i].second);
    // Two distinct donors are needed; with a single other parent the parent
    // itself serves as the second.
    if (nearest.size() < 2) nearest.push_back(p);
    neighbor_cache[p] = std::move(nearest);
    return *neighbor_cache[p];
  };

  Rng rng(params.seed);
  std::vector<std::vector<double>> out;
  out.reserve(n_new);
  for (size_t i = 0; i < n_new; ++i) {
    const size_t p = rng.UniformIndex(n);
    const std::vector<size_t>& cand = neighbors(p);
    const size_t a = rng.UniformIndex(cand.size());
    size_t b = rng.UniformIndex(cand.size() - 1);
    if (b >= a) ++b;
    const auto x1 = data.row(parents[p]);
    const auto x2 = data.row(parents[cand[a]]);
    const auto x3 = data.row(parents[cand[b]]);
    std::vector<double> child(x1.begin(), x1.end());
    for (size_t c : numeric) {
      if (rng.Uniform() < params.cr) {
        child[c] = std::clamp(x1[c] + params.f * (x2[c] - x3[c]), 0.0, 1.0);
      }
    }
    out.push_back(std::move(child));
  }
  return out;
}

absl::StatusOr<BalanceResult> BalanceAll(const Dataset& data,
                                         const Partition& partition,
                                         const SmoteParams& params,
                                         int threads) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  if (partition.total_rows() != data.num_rows()) {
    return absl::InvalidArgumentError(
        "partition does not cover the dataset");
  }
  absl::StatusOr<BalanceTargets> targets = ComputeTargets(partition, data);
  if (!targets.ok()) return targets.status();

  struct WorldDraw {
    absl::Status status;
    LabelDraw accepted;
    LabelDraw rejected;
  };
  std::vector<WorldDraw> draws(partition.num_worlds());
  ParallelFor(partition.num_worlds(), threads, [&](size_t w) {
    const auto& rows = partition.rows(w);
    if (rows.empty()) return;
    const uint64_t world_seed =
        DeriveSeed(params.seed, std::span<const int>(partition.world(w).codes));
    const LabelSplit split = SplitByLabel(data, rows);
    absl::StatusOr<LabelDraw> acc =
        ResampleLabel(data, split.accepted, targets->accepted, params,
                      DeriveSeed(world_seed, {1}));
    absl::StatusOr<LabelDraw> rej =
        ResampleLabel(data, split.rejected, targets->rejected, params,
                      DeriveSeed(world_seed, {0}));
    if (!acc.ok()) {
      draws[w].status = acc.status();
    } else if (!rej.ok()) {
      draws[w].status = rej.status();
    } else {
      draws[w].accepted = *std::move(acc);
      draws[w].rejected = *std::move(rej);
    }
  });

  BalanceResult result;
  result.targets = *targets;
  std::vector<double> values;
  const size_t width = data.num_columns();
  values.reserve(partition.num_worlds() *
                 (targets->accepted + targets->rejected) * width);
  for (size_t w = 0; w < partition.num_worlds(); ++w) {
    if (!draws[w].status.ok()) {
      return absl::Status(
          draws[w].status.code(),
          text::StrCat("balancing world #", w, ": ", draws[w].status.message()));
    }
    if (partition.rows(w).empty()) {
      result.empty_worlds.push_back(w);
      continue;
    }
    std::vector<size_t> kept = draws[w].accepted.kept;
    kept.insert(kept.end(), draws[w].rejected.kept.begin(),
                draws[w].rejected.kept.end());
    std::sort(kept.begin(), kept.end());
    for (size_t r : kept) {
      const auto row = data.row(r);
      values.insert(values.end(), row.begin(), row.end());
      result.source_rows.push_back(static_cast<int64_t>(r));
    }
    for (const LabelDraw* draw : {&draws[w].accepted, &draws[w].rejected}) {
      for (const auto& row : draw->synthetic) {
        values.insert(values.end(), row.begin(), row.end());
        result.source_rows.push_back(-1);
      }
    }
  }
  absl::StatusOr<Dataset> balanced = data.WithValues(std::move(values));
  if (!balanced.ok()) return balanced.status();
  result.data = *std::move(balanced);
  return result;
}

}  // namespace fairloan
