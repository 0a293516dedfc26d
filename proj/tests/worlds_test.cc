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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "fairloan/random.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairloan {
namespace {

using ::fairloan::testing::HmdaSpec;
using ::fairloan::testing::MakeDataset;
using ::fairloan::testing::RandomRows;

// Independent count: walk every assignment with nested recursion.
void BruteForce(const SensitiveSpec& spec, size_t p, std::vector<int>& cur,
                std::set<std::vector<int>>& out) {
  if (p == spec.size()) {
    out.insert(cur);
    return;
  }
  for (size_t o = 0; o < spec.parameters()[p].options.size(); ++o) {
    cur.push_back(static_cast<int>(o));
    BruteForce(spec, p + 1, cur, out);
    cur.pop_back();
  }
}

std::set<std::vector<int>> BruteForce(const SensitiveSpec& spec) {
  std::set<std::vector<int>> out;
  std::vector<int> cur;
  BruteForce(spec, 0, cur, out);
  return out;
}

TEST(SensitiveSpecTest, RejectsInvalidSpecs) {
  EXPECT_FALSE(SensitiveSpec::Create({}).ok());
  EXPECT_FALSE(SensitiveSpec::Create({{"sex", {"M"}}}).ok());
  EXPECT_FALSE(SensitiveSpec::Create({{"sex", {"M", "M"}}}).ok());
  EXPECT_FALSE(
      SensitiveSpec::Create({{"sex", {"M", "F"}}, {"sex", {"A", "B"}}}).ok());
}

TEST(CountWorldsTest, HmdaHasTwentySeven) {
  EXPECT_EQ(CountWorlds(HmdaSpec()), 27);
}

TEST(CountWorldsTest, SingleBinaryParameter) {
  EXPECT_EQ(CountWorlds(*SensitiveSpec::Create({{"sex", {"M", "F"}}})), 2);
}

TEST(CountWorldsTest, MixedOptionCountsMatchBruteForce) {
  const SensitiveSpec spec =
      *SensitiveSpec::Create({{"a", {"0", "1"}}, {"b", {"x", "y", "z"}}});
  EXPECT_EQ(BruteForce(spec).size(), 6);
  EXPECT_EQ(CountWorlds(spec), 6);
}

TEST(EnumerateWorldsTest, FirstParameterIsMostSignificant) {
  const SensitiveSpec spec =
      *SensitiveSpec::Create({{"sex", {"M", "F"}}, {"race", {"W", "B"}}});
  const std::vector<WorldKey> worlds = EnumerateWorlds(spec);
  std::vector<std::string> names;
  for (const WorldKey& w : worlds) {
    names.push_back(spec.parameters()[1].options[w.codes[1]] +
                    spec.parameters()[0].options[w.codes[0]]);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"WM", "BM", "WF", "BF"}));
  EXPECT_EQ(WorldName(spec, worlds[3]), "F/B");
}

TEST(EnumerateWorldsTest, HmdaWorldsAreAllDistinct) {
  const SensitiveSpec spec = HmdaSpec();
  const std::vector<WorldKey> worlds = EnumerateWorlds(spec);
  std::set<std::vector<int>> seen;
  for (const WorldKey& w : worlds) seen.insert(w.codes);
  EXPECT_EQ(worlds.size(), 27);
  EXPECT_EQ(seen, BruteForce(spec));
  EXPECT_TRUE(std::is_sorted(worlds.begin(), worlds.end()));
}

TEST(EnumerateWorldsTest, RandomSpecsMatchCount) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SensitiveParameter> params;
    const size_t n_params = 1 + rng.UniformIndex(4);
    for (size_t p = 0; p < n_params; ++p) {
      SensitiveParameter param{"p" + std::to_string(p), {}};
      const size_t n_opts = 2 + rng.UniformIndex(3);
      for (size_t o = 0; o < n_opts; ++o) {
        param.options.push_back("o" + std::to_string(o));
      }
      params.push_back(param);
    }
    const SensitiveSpec spec = *SensitiveSpec::Create(params);
    const std::vector<WorldKey> worlds = EnumerateWorlds(spec);
    EXPECT_EQ(worlds.size(), CountWorlds(spec));
    EXPECT_EQ(worlds.size(), BruteForce(spec).size());
    for (size_t i = 0; i < worlds.size(); ++i) {
      EXPECT_EQ(WorldOrdinal(spec, worlds[i]), i);
    }
  }
}

TEST(PartitionTest, OneRowPerWorld) {
  const SensitiveSpec spec =
      *SensitiveSpec::Create({{"sex", {"M", "F"}}, {"race", {"W", "B"}}});
  const Dataset data = MakeDataset(spec, 1,
                                   {{0, 0, 0.1, 0},
                                    {0, 1, 0.2, 1},
                                    {1, 0, 0.3, 0},
                                    {1, 1, 0.4, 1}});
  ASSERT_OK_AND_ASSIGN(Partition part, PartitionByWorld(data, spec));
  ASSERT_EQ(part.num_worlds(), 4);
  for (size_t w = 0; w < 4; ++w) {
    EXPECT_EQ(part.rows(w), (std::vector<size_t>{w}));
  }
}

TEST(PartitionTest, IdenticalCodesFillOneCell) {
  const SensitiveSpec spec = HmdaSpec();
  std::vector<std::vector<double>> rows(5, {1, 2, 0, 0.5, 1});
  const Dataset data = MakeDataset(spec, 1, rows);
  ASSERT_OK_AND_ASSIGN(Partition part, PartitionByWorld(data, spec));
  ASSERT_EQ(part.num_worlds(), 27);
  size_t non_empty = 0;
  for (size_t w = 0; w < 27; ++w) {
    if (part.rows(w).empty()) continue;
    ++non_empty;
    EXPECT_EQ(part.world(w).codes, (std::vector<int>{1, 2, 0}));
    EXPECT_EQ(part.rows(w).size(), 5);
  }
  EXPECT_EQ(non_empty, 1);
}

TEST(PartitionTest, RandomRowsLandInTheirOwnWorld) {
  const SensitiveSpec spec = HmdaSpec();
  const Dataset data = MakeDataset(
      spec, 2,
      RandomRows(spec, 2, 1000, 5, [](const auto&, Rng& r) {
        return r.Bernoulli(0.5);
      }));
  ASSERT_OK_AND_ASSIGN(Partition part, PartitionByWorld(data, spec));
  EXPECT_EQ(part.total_rows(), 1000);
  std::vector<int> owner(1000, -1);
  for (size_t w = 0; w < part.num_worlds(); ++w) {
    for (size_t r : part.rows(w)) {
      EXPECT_EQ(owner[r], -1) << "row " << r << " in two worlds";
      owner[r] = static_cast<int>(w);
      for (size_t p = 0; p < spec.size(); ++p) {
        EXPECT_EQ(data.row(r)[p], part.world(w).codes[p]);
      }
    }
  }
  EXPECT_EQ(std::count(owner.begin(), owner.end(), -1), 0);
}

TEST(PartitionTest, ConcatenatedCellsArePermutationOfRows) {
  const SensitiveSpec spec = HmdaSpec();
  const Dataset data = MakeDataset(
      spec, 1, RandomRows(spec, 1, 300, 9, [](const auto&, Rng& r) {
        return r.Bernoulli(0.3);
      }));
  ASSERT_OK_AND_ASSIGN(Partition part, PartitionByWorld(data, spec));
  std::vector<size_t> all;
  for (size_t w = 0; w < part.num_worlds(); ++w) {
    all.insert(all.end(), part.rows(w).begin(), part.rows(w).end());
  }
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(all.size(), 300);
}

TEST(PartitionTest, UnknownParameterIsNotFound) {
  const SensitiveSpec spec = HmdaSpec();
  const Dataset data = MakeDataset(spec, 1, {{0, 0, 0, 0.5, 1}});
  const SensitiveSpec other =
      *SensitiveSpec::Create({{"age", {"young", "old"}}});
  absl::StatusOr<Partition> part = PartitionByWorld(data, other);
  ASSERT_FALSE(part.ok());
  EXPECT_EQ(part.status().code(), absl::StatusCode::kNotFound);
}

TEST(SubstituteWorldTest, OwnWorldIsIdentity) {
  const std::vector<double> row = {1, 0, 2, 0.25, 0.75, 1};
  EXPECT_EQ(SubstituteWorld(row, WorldOf(row, 3)), row);
}

TEST(SubstituteWorldTest, SwapsOnlySensitiveCodes) {
  // race, sex, income, label; a White Male row moved to Black Female.
  const std::vector<double> row = {0, 0, 0.6, 1};
  const std::vector<double> moved = SubstituteWorld(row, WorldKey{{1, 1}});
  EXPECT_EQ(moved, (std::vector<double>{1, 1, 0.6, 1}));
}

TEST(SubstituteWorldTest, AllWorldsShareNonSensitiveFields) {
  const SensitiveSpec spec = HmdaSpec();
  const std::vector<double> row = {2, 1, 0, 0.1, 0.9, 0.4, 0};
  for (const WorldKey& w : EnumerateWorlds(spec)) {
    const std::vector<double> moved = SubstituteWorld(row, w);
    EXPECT_EQ(WorldOf(moved, 3), w);
    EXPECT_TRUE(std::equal(moved.begin() + 3, moved.end(), row.begin() + 3));
  }
}

TEST(SubstituteWorldTest, RestoringOriginalWorldGivesBackRow) {
  const SensitiveSpec spec = HmdaSpec();
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> row;
    for (int p = 0; p < 3; ++p) row.push_back(rng.UniformIndex(3));
    row.push_back(rng.Uniform());
    row.push_back(rng.UniformIndex(2));
    const WorldKey original = WorldOf(row, 3);
    const std::vector<WorldKey> worlds = EnumerateWorlds(spec);
    const WorldKey& other = worlds[rng.UniformIndex(worlds.size())];
    EXPECT_EQ(SubstituteWorld(SubstituteWorld(row, other), original), row);

    std::vector<double> in_place = row;
    AssignWorld(in_place, other);
    AssignWorld(in_place, original);
    EXPECT_EQ(in_place, row);
  }
}

}  // namespace
}  // namespace fairloan
