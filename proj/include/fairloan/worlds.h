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

#ifndef FAIRLOAN_WORLDS_H_
#define FAIRLOAN_WORLDS_H_

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fairloan/tabular.h"

namespace fairloan {

struct SensitiveParameter {
  std::string name;
  std::vector<std::string> options;
  bool operator==(const SensitiveParameter&) const = default;
};

// Ordered sensitive parameters, each with its ordered options.
class SensitiveSpec {
 public:
  SensitiveSpec() = default;

  // Requires at least one parameter, >= 2 options each, no duplicate options
  // and no duplicate parameter names.
  static absl::StatusOr<SensitiveSpec> Create(
      std::vector<SensitiveParameter> parameters);

  // The sensitive columns of a dataset, in column order.
  static absl::StatusOr<SensitiveSpec> FromDataset(const Dataset& data);

  const std::vector<SensitiveParameter>& parameters() const {
    return parameters_;
  }
  size_t size() const { return parameters_.size(); }
  bool operator==(const SensitiveSpec&) const = default;

 private:
  std::vector<SensitiveParameter> parameters_;
};

// One option code per parameter, in SensitiveSpec order.
struct WorldKey {
  std::vector<int> codes;
  auto operator<=>(const WorldKey&) const = default;
};

// Short display form, e.g. "White/Male/Hispanic or Latino".
std::string WorldName(const SensitiveSpec& spec, const WorldKey& key);

// Number of counterfactual worlds: the product of the per-parameter option
// counts. The published formula is written as a dot product of a parameter
// indicator vector with the option-count vector, which would give 9 rather
// than the 27 worlds every other part of the method relies on for the
// 3 x 3 x 3 case; the product is the consistent reading.
size_t CountWorlds(const SensitiveSpec& spec);

// All worlds in lexicographic order of option codes (first parameter most
// significant).
std::vector<WorldKey> EnumerateWorlds(const SensitiveSpec& spec);

// Position of `key` in EnumerateWorlds order.
size_t WorldOrdinal(const SensitiveSpec& spec, const WorldKey& key);

// The world a dataset row currently belongs to.
WorldKey WorldOf(std::span<const double> row, size_t num_sensitive);

// Row indices per world. Every world is present, empty ones included.
class Partition {
 public:
  Partition(std::vector<WorldKey> worlds, std::vector<std::vector<size_t>> cells)
      : worlds_(std::move(worlds)), cells_(std::move(cells)) {}

  size_t num_worlds() const { return worlds_.size(); }
  const WorldKey& world(size_t ordinal) const { return worlds_[ordinal]; }
  const std::vector<WorldKey>& worlds() const { return worlds_; }
  const std::vector<size_t>& rows(size_t ordinal) const {
    return cells_[ordinal];
  }
  size_t total_rows() const;

 private:
  std::vector<WorldKey> worlds_;
  std::vector<std::vector<size_t>> cells_;
};

// Splits `data` into one cell per world of `spec`. Its parameters must
// be the dataset's sensitive columns, in order, with matching options.
absl::StatusOr<Partition> PartitionByWorld(const Dataset& data,
                                           const SensitiveSpec& spec);

// Copy of `row` with its leading sensitive cells replaced by `key`.
std::vector<double> SubstituteWorld(std::span<const double> row,
                                    const WorldKey& key);

// In-place variant used on the hot probing path.
void AssignWorld(std::span<double> row, const WorldKey& key);

}  // namespace fairloan

#endif  // FAIRLOAN_WORLDS_H_
