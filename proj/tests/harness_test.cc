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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairloan/config.h"
#include "fairloan/report.h"
#include "fairloan/synthetic.h"
#include "fairloan/worlds.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fairloan {
namespace {

using ::fairloan::testing::HmdaSpec;
using ::fairloan::testing::Msg;
using ::fairloan::testing::Values;

namespace fs = std::filesystem;

SensitiveSpec FourWorlds() {
  return *SensitiveSpec::Create({{"race", {"White", "Black"}},
                                 {"sex", {"Male", "Female"}}});
}

Dataset BiasedFourWorldData(size_t rows, uint64_t seed) {
  SyntheticSpec s;
  s.spec = FourWorlds();
  s.n_rows = rows;
  s.label_bias_strength = 0.4;
  s.unprivileged = WorldsWithOptions(s.spec, 0, std::vector<int>{1});
  s.selection_skew = SkewByPrivilege(s.unprivileged, 4, 1);
  return *GenerateSynthetic(s, seed);
}

ExperimentConfig SmallConfig() {
  ExperimentConfig cfg;
  cfg.repeats = 3;
  cfg.master_seed = 12;
  cfg.fit.max_epochs = 300;
  return cfg;
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / name;
  fs::remove_all(dir);
  return dir;
}

TEST(ExperimentConfigTest, Validate) {
  EXPECT_TRUE(ExperimentConfig{}.Validate().ok());
  ExperimentConfig cfg;
  cfg.split_fraction = 1.0;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = ExperimentConfig{};
  cfg.repeats = 0;
  EXPECT_FALSE(cfg.Validate().ok());
  cfg = ExperimentConfig{};
  cfg.smote.k = 0;
  EXPECT_FALSE(cfg.Validate().ok());
}

TEST(StratifiedSplitTest, PreservesLabelRatio) {
  const Dataset data = BiasedFourWorldData(3001, 1);
  const TrainTestSplit split = StratifiedSplit(data, 0.7, 9);
  size_t pos = 0, pos_train = 0;
  for (size_t r = 0; r < data.num_rows(); ++r) pos += data.label(r);
  for (size_t r : split.train) pos_train += data.label(r);
  const size_t neg = data.num_rows() - pos;
  const size_t neg_train = split.train.size() - pos_train;
  EXPECT_LE(std::abs(static_cast<double>(pos_train) - 0.7 * pos), 1.0);
  EXPECT_LE(std::abs(static_cast<double>(neg_train) - 0.7 * neg), 1.0);

  std::vector<size_t> all = split.train;
  all.insert(all.end(), split.test.begin(), split.test.end());
  std::sort(all.begin(), all.end());
  for (size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
  EXPECT_TRUE(std::is_sorted(split.train.begin(), split.train.end()));
}

TEST(StratifiedSplitTest, DeterministicInSeed) {
  const Dataset data = BiasedFourWorldData(1000, 2);
  EXPECT_EQ(StratifiedSplit(data, 0.7, 5).train,
            StratifiedSplit(data, 0.7, 5).train);
  EXPECT_NE(StratifiedSplit(data, 0.7, 5).train,
            StratifiedSplit(data, 0.7, 6).train);
}

TEST(RepeatSeedTest, DistinctPerRepeat) {
  std::vector<uint64_t> seeds;
  for (int r = 0; r < 100; ++r) seeds.push_back(RepeatSeed(7, r));
  std::sort(seeds.begin(), seeds.end());
  EXPECT_EQ(std::unique(seeds.begin(), seeds.end()), seeds.end());
  EXPECT_NE(RepeatSeed(7, 0), RepeatSeed(8, 0));
}

TEST(LowerMedianTest, OddEvenAndSingle) {
  auto row = [](double v) {
    MetricRow m;
    m.accuracy = v;
    m.f1 = -v;
    return m;
  };
  EXPECT_EQ(LowerMedian({row(3), row(1), row(2)}).accuracy, 2);
  // Lower median of {1, 2, 3, 4} is 2; of {-4, -3, -2, -1} is -3.
  const MetricRow even = LowerMedian({row(4), row(1), row(3), row(2)});
  EXPECT_EQ(even.accuracy, 2);
  EXPECT_EQ(even.f1, -3);
  EXPECT_EQ(LowerMedian({row(0.25)}), row(0.25));
}

TEST(DebiasTest, BalancingPrecedesSituationTesting) {
  const Dataset data = BiasedFourWorldData(4000, 3);
  SmoteParams smote;
  smote.seed = 4;
  FitConfig fit;
  fit.max_epochs = 300;
  ASSERT_OK_AND_ASSIGN(DebiasResult result,
                       Debias(data, FourWorlds(), smote, fit));
  // The intermediate is exactly balanced.
  ASSERT_OK_AND_ASSIGN(Partition part,
                       PartitionByWorld(result.balanced, FourWorlds()));
  for (size_t w = 0; w < part.num_worlds(); ++w) {
    size_t acc = 0;
    for (size_t r : part.rows(w)) acc += result.balanced.label(r);
    EXPECT_EQ(acc, result.targets.accepted);
    EXPECT_EQ(part.rows(w).size() - acc, result.targets.rejected);
  }
  EXPECT_EQ(result.balanced_rows, result.balanced.num_rows());
  // Situation testing then removes rows of the balanced data only.
  std::vector<size_t> keep;
  size_t next = 0;
  for (size_t r = 0; r < result.balanced.num_rows(); ++r) {
    if (next < result.removed_rows.size() && result.removed_rows[next] == r) {
      ++next;
    } else {
      keep.push_back(r);
    }
  }
  EXPECT_EQ(next, result.removed_rows.size());
  EXPECT_EQ(Values(result.balanced.Subset(keep)), Values(result.data));
}

TEST(RunExperimentTest, SingleRepeatMedianIsThatRun) {
  const Dataset data = BiasedFourWorldData(3000, 5);
  ExperimentConfig cfg = SmallConfig();
  cfg.repeats = 1;
  ASSERT_OK_AND_ASSIGN(FairnessReport report,
                       RunExperiment(data, cfg, FourWorlds()));
  ASSERT_EQ(report.repeats.size(), 1);
  EXPECT_EQ(report.median_before, ToMetricRow(report.repeats[0].before));
  EXPECT_EQ(report.median_after, ToMetricRow(report.repeats[0].after));
}

TEST(RunExperimentTest, MediansAndSeedsAreConsistent) {
  const Dataset data = BiasedFourWorldData(3000, 6);
  const ExperimentConfig cfg = SmallConfig();
  ASSERT_OK_AND_ASSIGN(FairnessReport report,
                       RunExperiment(data, cfg, FourWorlds()));
  ASSERT_EQ(report.repeats.size(), 3);
  std::vector<MetricRow> before, after;
  for (int r = 0; r < 3; ++r) {
    const RepeatResult& rep = report.repeats[r];
    EXPECT_EQ(rep.repeat, r);
    EXPECT_EQ(rep.seed, RepeatSeed(cfg.master_seed, r));
    EXPECT_EQ(rep.before.train_rows + rep.before.test_rows, data.num_rows());
    EXPECT_EQ(rep.after.train_rows, rep.balanced_rows - rep.removed_rows);
    before.push_back(ToMetricRow(rep.before));
    after.push_back(ToMetricRow(rep.after));
  }
  EXPECT_EQ(report.median_before, LowerMedian(before));
  EXPECT_EQ(report.median_after, LowerMedian(after));
}

TEST(RunExperimentTest, ThreadCountDoesNotChangeResults) {
  const Dataset data = BiasedFourWorldData(3000, 7);
  ExperimentConfig cfg = SmallConfig();
  cfg.threads = 1;
  ASSERT_OK_AND_ASSIGN(FairnessReport one,
                       RunExperiment(data, cfg, FourWorlds()));
  cfg.threads = 4;
  ASSERT_OK_AND_ASSIGN(FairnessReport four,
                       RunExperiment(data, cfg, FourWorlds()));
  EXPECT_TRUE(one == four);
  EXPECT_EQ(*RenderRunsCsv(one), *RenderRunsCsv(four));
  EXPECT_EQ(*RenderSummary(one), *RenderSummary(four));
}

TEST(RunExperimentTest, RawTestSetWhenRepairIsOff) {
  const Dataset data = BiasedFourWorldData(3000, 8);
  ExperimentConfig cfg = SmallConfig();
  cfg.repeats = 1;
  cfg.repair_test = false;
  ASSERT_OK_AND_ASSIGN(FairnessReport report,
                       RunExperiment(data, cfg, FourWorlds()));
  EXPECT_EQ(report.repeats[0].after.test_rows,
            report.repeats[0].before.test_rows);
}

TEST(RunExperimentTest, FailingStageNamesRepeatAndStage) {
  // Too few rows per world to oversample in the 27-world layout.
  SyntheticSpec s;
  s.spec = HmdaSpec();
  s.n_rows = 270;
  s.selection_skew.assign(27, 1.0);
  s.selection_skew[0] = 200;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(s, 1));
  absl::StatusOr<FairnessReport> report =
      RunExperiment(data, SmallConfig(), HmdaSpec());
  ASSERT_FALSE(report.ok());
  const std::string msg = Msg(report.status());
  EXPECT_EQ(msg.rfind("repeat 0: ", 0), 0) << msg;
  EXPECT_NE(msg.find("balance"), std::string::npos) << msg;
}

TEST(ReportTest, WriteThenReadIsEqual) {
  const Dataset data = BiasedFourWorldData(2000, 9);
  ASSERT_OK_AND_ASSIGN(FairnessReport report,
                       RunExperiment(data, SmallConfig(), FourWorlds()));
  const fs::path dir = FreshDir("report_roundtrip");
  ASSERT_OK(WriteReport(report, dir));
  ASSERT_OK_AND_ASSIGN(FairnessReport back, ReadReport(dir));
  EXPECT_TRUE(back == report);

  const std::string runs = ReadAll(dir / kRunsFileName);
  EXPECT_EQ(runs.substr(0, runs.find('\n')),
            "seed,phase,awi_raw,awi_reported,accuracy,precision,recall,"
            "false_alarm,f1");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 1 + 2 * 3);
}

TEST(ReportTest, SameSeedGivesByteIdenticalFiles) {
  const Dataset data = BiasedFourWorldData(2000, 10);
  const fs::path a = FreshDir("report_a");
  const fs::path b = FreshDir("report_b");
  ASSERT_OK_AND_ASSIGN(FairnessReport first,
                       RunExperiment(data, SmallConfig(), FourWorlds()));
  ASSERT_OK_AND_ASSIGN(FairnessReport second,
                       RunExperiment(data, SmallConfig(), FourWorlds()));
  ASSERT_OK(WriteReport(first, a));
  ASSERT_OK(WriteReport(second, b));
  for (std::string_view name : {kRunsFileName, kSummaryFileName}) {
    EXPECT_EQ(ReadAll(a / name), ReadAll(b / name)) << name;
  }
}

TEST(ReportTest, EmptyReportIsAnError) {
  FairnessReport empty;
  EXPECT_FALSE(RenderRunsCsv(empty).ok());
  EXPECT_FALSE(RenderSummary(empty).ok());
  const fs::path dir = FreshDir("report_empty");
  EXPECT_FALSE(WriteReport(empty, dir).ok());
  EXPECT_FALSE(fs::exists(dir / kRunsFileName));
}

TEST(ReportTest, TamperedRunsAreDetected) {
  const Dataset data = BiasedFourWorldData(2000, 11);
  ASSERT_OK_AND_ASSIGN(FairnessReport report,
                       RunExperiment(data, SmallConfig(), FourWorlds()));
  const fs::path dir = FreshDir("report_tampered");
  ASSERT_OK(WriteReport(report, dir));
  std::string runs = ReadAll(dir / kRunsFileName);
  runs.replace(runs.find(",before,"), 8, ",after,,");
  std::ofstream(dir / kRunsFileName, std::ios::binary) << runs;
  EXPECT_FALSE(ReadReport(dir).ok());
}

constexpr char kConfig[] = R"({
  "columns": [
    {"name": "income"},
    {"name": "sex", "kind": "sensitive"},
    {"name": "purpose", "domain": ["home", "refi"]},
    {"name": "race", "kind": "sensitive"},
    {"name": "action", "kind": "label", "domain": ["denied", "originated"]}
  ],
  "sensitive": [
    {"name": "race", "options": ["White", "Black", "Joint"]},
    {"name": "sex", "options": ["Male", "Female"]}
  ],
  "missing_threshold": 0.1,
  "seed": 99,
  "smote": {"k": 3},
  "fit": {"learning_rate": 0.5},
  "experiment": {"repeats": 4, "repair_test": false},
  "synthetic": {"label_bias_strength": 0.3, "privileged_weight": 4,
                "unprivileged": {"parameter": "race", "options": ["Black"]}}
})";

TEST(ConfigTest, ParsesAllSections) {
  ASSERT_OK_AND_ASSIGN(ProjectConfig cfg, ParseConfig(kConfig));
  std::vector<std::string> names;
  for (const ColumnSpec& c : cfg.columns) names.push_back(c.name);
  // Sensitive columns follow the `sensitive` order and come first.
  EXPECT_EQ(names, (std::vector<std::string>{"race", "sex", "income",
                                             "purpose", "action"}));
  EXPECT_EQ(cfg.columns[0].domain,
            (std::vector<std::string>{"White", "Black", "Joint"}));
  EXPECT_EQ(CountWorlds(cfg.sensitive), 6);
  EXPECT_EQ(cfg.missing_threshold, 0.1);
  EXPECT_EQ(cfg.experiment.master_seed, 99);
  EXPECT_EQ(cfg.experiment.smote.k, 3);
  EXPECT_EQ(cfg.experiment.smote.f, 0.8);
  EXPECT_EQ(cfg.experiment.fit.learning_rate, 0.5);
  EXPECT_EQ(cfg.experiment.repeats, 4);
  EXPECT_FALSE(cfg.experiment.repair_test);
  EXPECT_EQ(cfg.synthetic.label_bias_strength, 0.3);
}

TEST(ConfigTest, SyntheticSpecFromConfig) {
  ASSERT_OK_AND_ASSIGN(ProjectConfig cfg, ParseConfig(kConfig));
  // `purpose` is categorical, which the generator cannot produce.
  EXPECT_FALSE(cfg.MakeSyntheticSpec(1000).ok());

  ASSERT_OK_AND_ASSIGN(
      ProjectConfig numeric,
      ParseConfig(R"({"columns": [
        {"name": "race", "kind": "sensitive",
         "domain": ["White", "Black", "Joint"]},
        {"name": "income"}, {"name": "term"},
        {"name": "action", "kind": "label", "domain": ["no", "yes"]}],
        "synthetic": {"label_bias_strength": 0.2, "privileged_weight": 3,
                      "unprivileged_weight": 1}})"));
  ASSERT_OK_AND_ASSIGN(SyntheticSpec s, numeric.MakeSyntheticSpec(600));
  EXPECT_EQ(s.n_rows, 600);
  EXPECT_EQ(s.feature_names, (std::vector<std::string>{"income", "term"}));
  EXPECT_EQ(s.label_name, "action");
  // Default designation: every option but the first.
  EXPECT_EQ(s.unprivileged, (std::vector<bool>{false, true, true}));
  EXPECT_EQ(s.selection_skew, (std::vector<double>{3, 1, 1}));
  EXPECT_EQ(s.label_bias_strength, 0.2);
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_FALSE(ParseConfig("{").ok());
  EXPECT_FALSE(ParseConfig(R"({"columns": []})").ok());
  EXPECT_FALSE(ParseConfig(R"({"colums": []})").ok());
  const std::string base =
      R"({"columns": [{"name": "s", "kind": "sensitive", "domain": ["a", "b"]},
                      {"name": "y", "kind": "label", "domain": ["n", "p"]}])";
  EXPECT_TRUE(ParseConfig(base + "}").ok());
  EXPECT_FALSE(ParseConfig(base + R"(, "smote": {"f": 2}})").ok());
  EXPECT_FALSE(ParseConfig(base + R"(, "smote": {"g": 0.1}})").ok());
  EXPECT_FALSE(ParseConfig(base + R"(, "experiment": {"repeats": 0}})").ok());
  EXPECT_FALSE(ParseConfig(base + R"(, "fit": {"learning_rate": "x"}})").ok());
  EXPECT_FALSE(ParseConfig(base + R"(, "missing_threshold": 2})").ok());
  EXPECT_FALSE(
      ParseConfig(base + R"(, "sensitive": [{"name": "z", "options": ["a", "b"]}]})")
          .ok());
}

TEST(ConfigTest, ShippedConfigsParse) {
  for (const char* name : {"hmda.json", "synthetic.json"}) {
    const fs::path path = fs::path(FAIRLOAN_SOURCE_DIR) / "configs" / name;
    EXPECT_TRUE(LoadConfig(path).ok()) << name;
  }
  EXPECT_FALSE(LoadConfig("/nonexistent/config.json").ok());
}

}  // namespace
}  // namespace fairloan
