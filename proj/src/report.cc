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

#include "fairloan/report.h"


#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fairloan/csv.h"
#include "fmt/printf.h"
#include "text.h"

namespace fairloan {
namespace {

std::string Num(double v) { return fmt::sprintf("%.17g", v); }

constexpr std::string_view kRunsHeader =
    "seed,phase,awi_raw,awi_reported,accuracy,precision,recall,false_alarm,f1";

void AppendRunRow(std::string& out, uint64_t seed, std::string_view phase,
                  const MetricRow& m) {
  text::StrAppend(out, seed, ",", phase, ",", Num(m.awi_raw), ",",
                  Num(m.awi_reported), ",", Num(m.accuracy), ",",
                  Num(m.precision), ",", Num(m.recall), ",",
                  Num(m.false_alarm), ",", Num(m.f1), "\n");
}

void AppendArm(std::string& out, const std::string& prefix,
               const ArmResult& arm) {
  const ConfusionCounts& c = arm.performance.confusion;
  text::StrAppend(out, prefix, "train_rows=", arm.train_rows, "\n");
  text::StrAppend(out, prefix, "test_rows=", arm.test_rows, "\n");
  text::StrAppend(out, prefix, "tp=", c.tp, "\n");
  text::StrAppend(out, prefix, "fp=", c.fp, "\n");
  text::StrAppend(out, prefix, "tn=", c.tn, "\n");
  text::StrAppend(out, prefix, "fn=", c.fn, "\n");
  text::StrAppend(out, prefix, "awi_biased=", arm.awi.biased_points, "\n");
}

void AppendMetricRow(std::string& out, const std::string& prefix,
                     const MetricRow& m) {
  text::StrAppend(out, prefix, "awi_raw=", Num(m.awi_raw), "\n");
  text::StrAppend(out, prefix, "awi_reported=", Num(m.awi_reported), "\n");
  text::StrAppend(out, prefix, "accuracy=", Num(m.accuracy), "\n");
  text::StrAppend(out, prefix, "precision=", Num(m.precision), "\n");
  text::StrAppend(out, prefix, "recall=", Num(m.recall), "\n");
  text::StrAppend(out, prefix, "false_alarm=", Num(m.false_alarm), "\n");
  text::StrAppend(out, prefix, "f1=", Num(m.f1), "\n");
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(text::StrCat("cannot open ", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Typed access to the key=value lines of a summary file.
class KeyValues {
 public:
  static absl::StatusOr<KeyValues> Parse(std::string_view text) {
    KeyValues kv;
    for (std::string_view line : text::Split(text, '\n')) {
      if (line.empty() || line[0] == '#') continue;
      const size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        return absl::InvalidArgumentError(
            text::StrCat("malformed summary line: ", line));
      }
      kv.values_[std::string(line.substr(0, eq))] =
          std::string(line.substr(eq + 1));
    }
    return kv;
  }

  absl::StatusOr<std::string> Get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      return absl::InvalidArgumentError(
          text::StrCat("summary lacks key '", key, "'"));
    }
    return it->second;
  }

  absl::Status Double(const std::string& key, double& out) const {
    absl::StatusOr<std::string> v = Get(key);
    if (!v.ok()) return v.status();
    if (!text::ParseDouble(*v, &out)) return Bad(key);
    return absl::OkStatus();
  }

  template <typename Int>
  absl::Status Integer(const std::string& key, Int& out) const {
    absl::StatusOr<std::string> v = Get(key);
    if (!v.ok()) return v.status();
    if (!text::ParseInt(*v, &out)) return Bad(key);
    return absl::OkStatus();
  }

  absl::Status Bool(const std::string& key, bool& out) const {
    absl::StatusOr<std::string> v = Get(key);
    if (!v.ok()) return v.status();
    if (!text::ParseBool(*v, &out)) return Bad(key);
    return absl::OkStatus();
  }

 private:
  static absl::Status Bad(const std::string& key) {
    return absl::InvalidArgumentError(
        text::StrCat("summary key '", key, "' has a malformed value"));
  }

  std::map<std::string, std::string> values_;
};

absl::StatusOr<ArmResult> ParseArm(const KeyValues& kv,
                                   const std::string& prefix) {
  ArmResult arm;
  ConfusionCounts c;
  size_t biased = 0;
  for (auto [key, field] :
       {std::pair{"train_rows", &arm.train_rows},
        std::pair{"test_rows", &arm.test_rows}, std::pair{"tp", &c.tp},
        std::pair{"fp", &c.fp}, std::pair{"tn", &c.tn}, std::pair{"fn", &c.fn},
        std::pair{"awi_biased", &biased}}) {
    if (absl::Status s = kv.Integer(prefix + key, *field); !s.ok()) return s;
  }
  arm.performance = MetricsFromConfusion(c);
  arm.awi = MakeAwiScore(biased, arm.test_rows);
  return arm;
}

}  // namespace

absl::StatusOr<std::string> RenderRunsCsv(const FairnessReport& report) {
  if (report.repeats.empty()) {
    return absl::FailedPreconditionError("report has no repeats");
  }
  std::string out = text::StrCat(kRunsHeader, "\n");
  for (const RepeatResult& r : report.repeats) {
    AppendRunRow(out, r.seed, "before", ToMetricRow(r.before));
    AppendRunRow(out, r.seed, "after", ToMetricRow(r.after));
  }
  return out;
}

absl::StatusOr<std::string> RenderSummary(const FairnessReport& report) {
  if (report.repeats.empty()) {
    return absl::FailedPreconditionError("report has no repeats");
  }
  const ExperimentConfig& cfg = report.config;
  const MetricRow& b = report.median_before;
  const MetricRow& a = report.median_after;
  std::string out = "# fairloan fairness report\n#\n";
  out += fmt::sprintf("# %-26s %10s %10s\n",
                        text::StrCat("median of ", report.repeats.size(),
                                     " repeat(s)"),
                        "before", "after");
  for (auto [name, before, after] :
       {std::tuple{"AWI (x10)", b.awi_reported, a.awi_reported},
        std::tuple{"accuracy", b.accuracy, a.accuracy},
        std::tuple{"precision", b.precision, a.precision},
        std::tuple{"recall", b.recall, a.recall},
        std::tuple{"false alarm", b.false_alarm, a.false_alarm},
        std::tuple{"F1", b.f1, a.f1}}) {
    out += fmt::sprintf("# %-26s %10.4f %10.4f\n", name, before, after);
  }
  out += "#\n";

  text::StrAppend(out, "config.split_fraction=", Num(cfg.split_fraction), "\n");
  text::StrAppend(out, "config.repeats=", cfg.repeats, "\n");
  text::StrAppend(out, "config.master_seed=", cfg.master_seed, "\n");
  text::StrAppend(out, "config.repair_test=",
                  cfg.repair_test ? "true" : "false", "\n");
  text::StrAppend(out, "config.smote.f=", Num(cfg.smote.f), "\n");
  text::StrAppend(out, "config.smote.cr=", Num(cfg.smote.cr), "\n");
  text::StrAppend(out, "config.smote.k=", cfg.smote.k, "\n");
  text::StrAppend(out, "config.fit.learning_rate=", Num(cfg.fit.learning_rate),
                  "\n");
  text::StrAppend(out, "config.fit.max_epochs=", cfg.fit.max_epochs, "\n");
  text::StrAppend(out, "config.fit.tolerance=", Num(cfg.fit.tolerance), "\n");
  text::StrAppend(out, "config.fit.l2=", Num(cfg.fit.l2), "\n");

  for (const RepeatResult& r : report.repeats) {
    const std::string prefix = text::StrCat("repeat.", r.repeat, ".");
    text::StrAppend(out, prefix, "seed=", r.seed, "\n");
    text::StrAppend(out, prefix, "balanced_rows=", r.balanced_rows, "\n");
    text::StrAppend(out, prefix, "removed_rows=", r.removed_rows, "\n");
    AppendArm(out, prefix + "before.", r.before);
    AppendArm(out, prefix + "after.", r.after);
  }
  AppendMetricRow(out, "median.before.", b);
  AppendMetricRow(out, "median.after.", a);
  return out;
}

absl::Status WriteReport(const FairnessReport& report,
                         const std::filesystem::path& dir) {
  absl::StatusOr<std::string> runs = RenderRunsCsv(report);
  if (!runs.ok()) return runs.status();
  absl::StatusOr<std::string> summary = RenderSummary(report);
  if (!summary.ok()) return summary.status();

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(text::StrCat(
        "cannot create report directory ", dir.string(), ": ", ec.message()));
  }
  for (auto [name, text] : {std::pair{kRunsFileName, &*runs},
                            std::pair{kSummaryFileName, &*summary}}) {
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      return absl::PermissionDeniedError(
          text::StrCat("cannot open ", path.string(), " for writing"));
    }
    out << *text;
    if (!out) return absl::InternalError(text::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<FairnessReport> ReadReport(const std::filesystem::path& dir) {
  absl::StatusOr<std::string> summary_text = ReadFile(dir / kSummaryFileName);
  if (!summary_text.ok()) return summary_text.status();
  absl::StatusOr<std::string> runs_text = ReadFile(dir / kRunsFileName);
  if (!runs_text.ok()) return runs_text.status();
  absl::StatusOr<KeyValues> kv = KeyValues::Parse(*summary_text);
  if (!kv.ok()) return kv.status();

  FairnessReport report;
  ExperimentConfig& cfg = report.config;
  for (absl::Status s :
       {kv->Double("config.split_fraction", cfg.split_fraction),
        kv->Integer("config.repeats", cfg.repeats),
        kv->Integer("config.master_seed", cfg.master_seed),
        kv->Bool("config.repair_test", cfg.repair_test),
        kv->Double("config.smote.f", cfg.smote.f),
        kv->Double("config.smote.cr", cfg.smote.cr),
        kv->Integer("config.smote.k", cfg.smote.k),
        kv->Double("config.fit.learning_rate", cfg.fit.learning_rate),
        kv->Integer("config.fit.max_epochs", cfg.fit.max_epochs),
        kv->Double("config.fit.tolerance", cfg.fit.tolerance),
        kv->Double("config.fit.l2", cfg.fit.l2)}) {
    if (!s.ok()) return s;
  }
  if (cfg.repeats < 1) {
    return absl::InvalidArgumentError("report has no repeats");
  }

  // runs.csv: two rows per repeat, before then after.
  std::istringstream runs_in(*runs_text);
  csv::Reader reader(runs_in);
  csv::Record record;
  absl::StatusOr<bool> more = reader.Next(record);
  if (!more.ok()) return more.status();
  std::vector<csv::Record> rows;
  while (true) {
    more = reader.Next(record);
    if (!more.ok()) return more.status();
    if (!*more) break;
    rows.push_back(record);
  }
  if (rows.size() != 2 * static_cast<size_t>(cfg.repeats)) {
    return absl::InvalidArgumentError(
        "runs.csv row count does not match config.repeats");
  }

  std::vector<MetricRow> before;
  std::vector<MetricRow> after;
  for (int r = 0; r < cfg.repeats; ++r) {
    RepeatResult rep;
    rep.repeat = r;
    const std::string prefix = text::StrCat("repeat.", r, ".");
    for (absl::Status s : {kv->Integer(prefix + "seed", rep.seed),
                           kv->Integer(prefix + "balanced_rows", rep.balanced_rows),
                           kv->Integer(prefix + "removed_rows", rep.removed_rows)}) {
      if (!s.ok()) return s;
    }
    absl::StatusOr<ArmResult> b = ParseArm(*kv, prefix + "before.");
    if (!b.ok()) return b.status();
    absl::StatusOr<ArmResult> a = ParseArm(*kv, prefix + "after.");
    if (!a.ok()) return a.status();
    rep.before = *b;
    rep.after = *a;

    for (auto [row, phase, arm] :
         {std::tuple{&rows[2 * r], "before", &rep.before},
          std::tuple{&rows[2 * r + 1], "after", &rep.after}}) {
      const MetricRow expected = ToMetricRow(*arm);
      std::string line;
      AppendRunRow(line, rep.seed, phase, expected);
      std::string actual;
      for (size_t i = 0; i < row->size(); ++i) {
        text::StrAppend(actual, i ? "," : "", (*row)[i]);
      }
      if (actual + "\n" != line) {
        return absl::InvalidArgumentError(text::StrCat(
            "runs.csv row for repeat ", r, " (", phase,
            ") disagrees with the summary counts"));
      }
    }
    before.push_back(ToMetricRow(rep.before));
    after.push_back(ToMetricRow(rep.after));
    report.repeats.push_back(rep);
  }
  report.median_before = LowerMedian(before);
  report.median_after = LowerMedian(after);

  MetricRow stored_before, stored_after;
  for (auto [prefix, row] : {std::pair{"median.before.", &stored_before},
                             std::pair{"median.after.", &stored_after}}) {
    const std::string p = prefix;
    for (absl::Status s : {kv->Double(p + "awi_raw", row->awi_raw),
                           kv->Double(p + "awi_reported", row->awi_reported),
                           kv->Double(p + "accuracy", row->accuracy),
                           kv->Double(p + "precision", row->precision),
                           kv->Double(p + "recall", row->recall),
                           kv->Double(p + "false_alarm", row->false_alarm),
                           kv->Double(p + "f1", row->f1)}) {
      if (!s.ok()) return s;
    }
  }
  if (!(stored_before == report.median_before) ||
      !(stored_after == report.median_after)) {
    return absl::InvalidArgumentError(
        "stored medians disagree with the per-repeat values");
  }
  return report;
}

}  // namespace fairloan
