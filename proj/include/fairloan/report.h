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

#ifndef FAIRLOAN_REPORT_H_
#define FAIRLOAN_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/harness.h"

namespace fairloan {

inline constexpr std::string_view kRunsFileName = "runs.csv";
inline constexpr std::string_view kSummaryFileName = "summary.txt";

// One CSV row per repeat and phase:
//   seed,phase,awi_raw,awi_reported,accuracy,precision,recall,false_alarm,f1
absl::StatusOr<std::string> RenderRunsCsv(const FairnessReport& report);

// Flat key=value file (config echo, per-repeat counts, medians), preceded by
// a commented table of the medians.
absl::StatusOr<std::string> RenderSummary(const FairnessReport& report);

// Writes runs.csv and summary.txt into `dir` (created if needed). Output is a
// pure function of the report. Fails on a report with no repeats.
absl::Status WriteReport(const FairnessReport& report,
                         const std::filesystem::path& dir);

// Reads a report written by WriteReport. Per-repeat metrics are rebuilt from
// the confusion counts in the summary and checked against runs.csv.
absl::StatusOr<FairnessReport> ReadReport(const std::filesystem::path& dir);

}  // namespace fairloan

#endif  // FAIRLOAN_REPORT_H_
