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

#include "fairloan/synthetic.h"


#include <algorithm>
#include <cmath>
#include <optional>

#include "fairloan/random.h"
#include "text.h"

namespace fairloan {
namespace {

constexpr double kFeatureSpread = 0.18;
constexpr uint64_t kWorldMeanSalt = 0x6d65616e73ULL;

}  // namespace

absl::Status SyntheticSpec::Validate() const {
  if (spec.size() == 0) {
    return absl::InvalidArgumentError("synthetic spec has no sensitive parameters");
  }
  const size_t worlds = CountWorlds(spec);
  if (n_rows < 10 * worlds) {
    return absl::InvalidArgumentError(text::StrCat(
        "need at least 10 rows per world (", 10 * worlds, "), got ", n_rows));
  }
  if (n_features == 0) {
    return absl::InvalidArgumentError("need at least one feature");
  }
  if (!feature_names.empty() && feature_names.size() != n_features) {
    return absl::InvalidArgumentError("feature_names must match n_features");
  }
  if (!selection_skew.empty()) {
    if (selection_skew.size() != worlds) {
      return absl::InvalidArgumentError("selection_skew needs one weight per world");
    }
    for (double w : selection_skew) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        return absl::InvalidArgumentError("selection weights must be positive");
      }
    }
  }
  if (!unprivileged.empty() && unprivileged.size() != worlds) {
    return absl::InvalidArgumentError("unprivileged needs one flag per world");
  }
  if (!(label_bias_strength >= 0.0 && label_bias_strength <= 1.0)) {
    return absl::InvalidArgumentError("label_bias_strength must lie in [0, 1]");
  }
  if (!(noise >= 0.0) || !(world_shift >= 0.0)) {
    return absl::InvalidArgumentError("noise and world_shift must be >= 0");
  }
  if (label_domain.size() != 2) {
    return absl::InvalidArgumentError("label_domain needs exactly two values");
  }
  return absl::OkStatus();
}

std::vector<double> FairRuleCoefficients(size_t n_features) {
  std::vector<double> beta(n_features);
  for (size_t j = 0; j < n_features; ++j) beta[j] = 1.0 / (j + 1.0);
  return beta;
}

std::vector<bool> WorldsWithOptions(const SensitiveSpec& spec, size_t parameter,
                                    std::span<const int> option_codes) {
  std::vector<bool> flags;
  for (const WorldKey& key : EnumerateWorlds(spec)) {
    flags.push_back(std::find(option_codes.begin(), option_codes.end(),
                              key.codes[parameter]) != option_codes.end());
  }
  return flags;
}

std::vector<double> SkewByPrivilege(const std::vector<bool>& unprivileged,
                                    double privileged_weight,
                                    double unprivileged_weight) {
  std::vector<double> weights;
  for (bool u : unprivileged) {
    weights.push_back(u ? unprivileged_weight : privileged_weight);
  }
  return weights;
}

absl::StatusOr<Dataset> GenerateSynthetic(const SyntheticSpec& s,
                                          uint64_t seed) {
  if (absl::Status st = s.Validate(); !st.ok()) return st;
  const std::vector<WorldKey> worlds = EnumerateWorlds(s.spec);
  const size_t num_worlds = worlds.size();
  const size_t dims = s.spec.size();

  std::vector<double> cumulative(num_worlds);
  double total = 0.0;
  for (size_t w = 0; w < num_worlds; ++w) {
    total += s.selection_skew.empty() ? 1.0 : s.selection_skew[w];
    cumulative[w] = total;
  }

  // Per-world feature means, fixed by the world ordinal alone.
  std::vector<double> means(num_worlds * s.n_features, 0.5);
  if (s.world_shift > 0.0) {
    for (size_t w = 0; w < num_worlds; ++w) {
      for (size_t j = 0; j < s.n_features; ++j) {
        Rng rng(DeriveSeed(kWorldMeanSalt, {w, j}));
        means[w * s.n_features + j] =
            0.5 + s.world_shift * (2.0 * rng.Uniform() - 1.0);
      }
    }
  }
  const std::vector<double> beta = FairRuleCoefficients(s.n_features);

  std::vector<ColumnSpec> schema;
  std::vector<std::optional<MinMax>> normalization;
  for (const SensitiveParameter& p : s.spec.parameters()) {
    schema.push_back({p.name, ColumnKind::kSensitive, p.options});
    normalization.emplace_back();
  }
  for (size_t j = 0; j < s.n_features; ++j) {
    schema.push_back({s.feature_names.empty() ? text::StrCat("x", j)
                                              : s.feature_names[j],
                      ColumnKind::kFeature,
                      {}});
    normalization.emplace_back(MinMax{0.0, 1.0});
  }
  schema.push_back({s.label_name, ColumnKind::kLabel, s.label_domain});
  normalization.emplace_back();

  const size_t width = schema.size();
  std::vector<double> values(s.n_rows * width);
  Rng rng(seed);
  for (size_t r = 0; r < s.n_rows; ++r) {
    double* row = values.data() + r * width;
    const double pick = rng.Uniform() * total;
    const size_t w = std::min<size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), pick) -
            cumulative.begin(),
        num_worlds - 1);
    for (size_t d = 0; d < dims; ++d) row[d] = worlds[w].codes[d];
    double latent = 0.0;
    for (size_t j = 0; j < s.n_features; ++j) {
      const double x = std::clamp(
          means[w * s.n_features + j] + kFeatureSpread * rng.Normal(), 0.0,
          1.0);
      row[dims + j] = x;
      latent += beta[j] * (x - 0.5);
    }
    latent += s.noise * rng.Normal();
    int label = latent > 0.0 ? 1 : 0;
    // Always consume the draw so the stream does not depend on the flags.
    const double flip = rng.Uniform();
    if (label == 1 && !s.unprivileged.empty() && s.unprivileged[w] &&
        flip < s.label_bias_strength) {
      label = 0;
    }
    row[width - 1] = label;
  }
  return Dataset::Create(std::move(schema), std::move(values),
                         std::move(normalization));
}

}  // namespace fairloan
