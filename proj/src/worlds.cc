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

#include "fairloan/worlds.h"


#include <set>

#include "absl/status/status.h"
#include "text.h"

namespace fairloan {

absl::StatusOr<SensitiveSpec> SensitiveSpec::Create(
    std::vector<SensitiveParameter> parameters) {
  if (parameters.empty()) {
    return absl::InvalidArgumentError("need at least one sensitive parameter");
  }
  std::set<std::string> names;
  for (const SensitiveParameter& p : parameters) {
    if (!names.insert(p.name).second) {
      return absl::InvalidArgumentError(
          text::StrCat("duplicate sensitive parameter '", p.name, "'"));
    }
    if (p.options.size() < 2) {
      return absl::InvalidArgumentError(text::StrCat(
          "sensitive parameter '", p.name, "' needs at least two options"));
    }
    std::set<std::string> options(p.options.begin(), p.options.end());
    if (options.size() != p.options.size()) {
      return absl::InvalidArgumentError(text::StrCat(
          "sensitive parameter '", p.name, "' has duplicate options"));
    }
  }
  SensitiveSpec spec;
  spec.parameters_ = std::move(parameters);
  return spec;
}

absl::StatusOr<SensitiveSpec> SensitiveSpec::FromDataset(const Dataset& data) {
  std::vector<SensitiveParameter> params;
  for (size_t c = 0; c < data.num_sensitive(); ++c) {
    params.push_back({data.schema()[c].name, data.schema()[c].domain});
  }
  return Create(std::move(params));
}

std::string WorldName(const SensitiveSpec& spec, const WorldKey& key) {
  std::vector<std::string_view> parts;
  for (size_t i = 0; i < key.codes.size(); ++i) {
    parts.push_back(spec.parameters()[i].options[key.codes[i]]);
  }
  return text::Join(parts, "/");
}

size_t CountWorlds(const SensitiveSpec& spec) {
  size_t count = 1;
  for (const SensitiveParameter& p : spec.parameters()) count *= p.options.size();
  return count;
}

std::vector<WorldKey> EnumerateWorlds(const SensitiveSpec& spec) {
  const size_t n = CountWorlds(spec);
  const size_t dims = spec.size();
  std::vector<WorldKey> worlds;
  worlds.reserve(n);
  WorldKey key{std::vector<int>(dims, 0)};
  for (size_t i = 0; i < n; ++i) {
    worlds.push_back(key);
    // Odometer increment, last parameter fastest.
    for (size_t d = dims; d-- > 0;) {
      if (++key.codes[d] < static_cast<int>(spec.parameters()[d].options.size())) {
        break;
      }
      key.codes[d] = 0;
    }
  }
  return worlds;
}

size_t WorldOrdinal(const SensitiveSpec& spec, const WorldKey& key) {
  size_t ordinal = 0;
  for (size_t d = 0; d < spec.size(); ++d) {
    ordinal = ordinal * spec.parameters()[d].options.size() + key.codes[d];
  }
  return ordinal;
}

WorldKey WorldOf(std::span<const double> row, size_t num_sensitive) {
  WorldKey key;
  key.codes.reserve(num_sensitive);
  for (size_t c = 0; c < num_sensitive; ++c) {
    key.codes.push_back(static_cast<int>(row[c]));
  }
  return key;
}

size_t Partition::total_rows() const {
  size_t total = 0;
  for (const auto& cell : cells_) total += cell.size();
  return total;
}

absl::StatusOr<Partition> PartitionByWorld(const Dataset& data,
                                           const SensitiveSpec& spec) {
  for (size_t d = 0; d < spec.size(); ++d) {
    const SensitiveParameter& p = spec.parameters()[d];
    if (d >= data.num_sensitive() || data.schema()[d].name != p.name) {
      return absl::NotFoundError(text::StrCat(
          "sensitive parameter '", p.name,
          "' is not sensitive column ", d, " of the dataset"));
    }
    if (data.schema()[d].domain != p.options) {
      return absl::InvalidArgumentError(text::StrCat(
          "options of sensitive parameter '", p.name,
          "' differ from the dataset column domain"));
    }
  }
  if (spec.size() != data.num_sensitive()) {
    return absl::InvalidArgumentError(
        "dataset has sensitive columns not covered by the sensitive spec");
  }
  std::vector<WorldKey> worlds = EnumerateWorlds(spec);
  std::vector<std::vector<size_t>> cells(worlds.size());
  for (size_t r = 0; r < data.num_rows(); ++r) {
    const WorldKey key = WorldOf(data.row(r), spec.size());
    cells[WorldOrdinal(spec, key)].push_back(r);
  }
  return Partition(std::move(worlds), std::move(cells));
}

std::vector<double> SubstituteWorld(std::span<const double> row,
                                    const WorldKey& key) {
  std::vector<double> out(row.begin(), row.end());
  AssignWorld(out, key);
  return out;
}

void AssignWorld(std::span<double> row, const WorldKey& key) {
  for (size_t c = 0; c < key.codes.size(); ++c) row[c] = key.codes[c];
}

}  // namespace fairloan
