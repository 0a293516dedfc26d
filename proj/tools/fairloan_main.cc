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


// Command-line front end: prepare, synth, debias and evaluate.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/config.h"
#include "fairloan/csv.h"
#include "fairloan/harness.h"
#include "fairloan/model.h"
#include "fairloan/parallel.h"
#include "fairloan/random.h"
#include "fairloan/report.h"
#include "fairloan/synthetic.h"
#include "fairloan/tabular.h"
#include "fairloan/worlds.h"
#include "fmt/format.h"

namespace fairloan {
namespace {

constexpr int kInputError = 1;
constexpr int kPipelineError = 2;

int Fail(int code, std::string_view stage, const absl::Status& status) {
  fmt::print(stderr, "fairloan: {}: {}\n", stage,
             std::string(status.message()));
  return code;
}

// The config columns that appear in the file's header, in config order.
// Prepared files may lack feature columns that cleaning dropped, but the
// label and every sensitive column must be there.
absl::StatusOr<std::vector<ColumnSpec>> EffectiveSchema(
    const ProjectConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(fmt::format("cannot open {}", path));
  csv::Reader reader(in);
  csv::Record header;
  absl::StatusOr<bool> more = reader.Next(header);
  if (!more.ok()) return more.status();
  if (!*more) return absl::InvalidArgumentError("empty CSV: no header row");

  std::vector<ColumnSpec> schema;
  for (const ColumnSpec& col : config.columns) {
    const bool present = std::any_of(
        header.begin(), header.end(), [&](const std::string& h) {
          return h == col.name;
        });
    if (present) {
      schema.push_back(col);
    } else if (col.kind != ColumnKind::kFeature) {
      return absl::InvalidArgumentError(fmt::format(
          "header mismatch: required {} column '{}' not in header",
          ColumnKindName(col.kind), col.name));
    }
  }
  return schema;
}

// Loads, cleans and encodes a CSV under `schema`.
absl::StatusOr<Dataset> LoadDataset(const ProjectConfig& config,
                                    const std::vector<ColumnSpec>& schema,
                                    const std::string& path) {
  absl::StatusOr<RawTable> raw =
      LoadCsv(path, schema, config.missing_markers);
  if (!raw.ok()) return raw.status();
  absl::StatusOr<RawTable> clean = Clean(*raw, config.missing_threshold);
  if (!clean.ok()) return clean.status();
  return EncodeAndNormalize(*clean);
}

absl::StatusOr<Dataset> LoadPrepared(const ProjectConfig& config,
                                     const std::string& path) {
  absl::StatusOr<std::vector<ColumnSpec>> schema =
      EffectiveSchema(config, path);
  if (!schema.ok()) return schema.status();
  return LoadDataset(config, *schema, path);
}

int RunPrepare(const std::string& config_path, const std::string& input,
               const std::string& output) {
  absl::StatusOr<ProjectConfig> config = LoadConfig(config_path);
  if (!config.ok()) return Fail(kInputError, "config", config.status());
  absl::StatusOr<RawTable> raw =
      LoadCsv(input, config->columns, config->missing_markers);
  if (!raw.ok()) return Fail(kInputError, "load", raw.status());
  absl::StatusOr<RawTable> clean = Clean(*raw, config->missing_threshold);
  if (!clean.ok()) return Fail(kInputError, "clean", clean.status());
  absl::StatusOr<Dataset> data = EncodeAndNormalize(*clean);
  if (!data.ok()) return Fail(kInputError, "encode", data.status());
  if (absl::Status s = WriteCsv(*data, output); !s.ok()) {
    return Fail(kInputError, "write", s);
  }
  fmt::print(stderr, "prepared {} of {} rows, {} columns\n", data->num_rows(),
             raw->num_rows(), data->num_columns());
  return 0;
}

int RunSynth(const std::string& config_path, size_t rows,
             std::optional<uint64_t> seed, const std::string& output) {
  absl::StatusOr<ProjectConfig> config = LoadConfig(config_path);
  if (!config.ok()) return Fail(kInputError, "config", config.status());
  absl::StatusOr<SyntheticSpec> spec = config->MakeSyntheticSpec(rows);
  if (!spec.ok()) return Fail(kInputError, "config", spec.status());
  absl::StatusOr<Dataset> data = GenerateSynthetic(
      *spec, seed.value_or(config->experiment.master_seed));
  if (!data.ok()) return Fail(kInputError, "synth", data.status());
  if (absl::Status s = WriteCsv(*data, output); !s.ok()) {
    return Fail(kInputError, "write", s);
  }
  return 0;
}

int RunDebias(const std::string& config_path, const std::string& input,
              const std::string& output, const std::string& model_path,
              std::optional<uint64_t> seed, std::optional<int> threads) {
  absl::StatusOr<ProjectConfig> config = LoadConfig(config_path);
  if (!config.ok()) return Fail(kInputError, "config", config.status());
  absl::StatusOr<Dataset> data = LoadPrepared(*config, input);
  if (!data.ok()) return Fail(kInputError, "load", data.status());

  const ExperimentConfig& exp = config->experiment;
  const int workers = ResolveThreads(threads.value_or(exp.threads));
  SmoteParams smote = exp.smote;
  smote.seed = DeriveSeed(seed.value_or(exp.master_seed), {1});
  absl::StatusOr<DebiasResult> repaired =
      Debias(*data, config->sensitive, smote, exp.fit, workers);
  if (!repaired.ok()) return Fail(kPipelineError, "debias", repaired.status());
  if (absl::Status s = WriteCsv(repaired->data, output); !s.ok()) {
    return Fail(kInputError, "write", s);
  }
  fmt::print(stderr,
             "balanced to {} rows ({} accepted / {} rejected per world), "
             "situation testing removed {}, wrote {}\n",
             repaired->balanced_rows, repaired->targets.accepted,
             repaired->targets.rejected, repaired->removed_rows.size(),
             repaired->data.num_rows());

  if (!model_path.empty()) {
    absl::StatusOr<ClassifierModel> model =
        Fit(repaired->data, exp.fit, workers);
    if (!model.ok()) return Fail(kPipelineError, "fit", model.status());
    if (absl::Status s = SaveModel(*model, model_path); !s.ok()) {
      return Fail(kInputError, "write", s);
    }
  }
  return 0;
}

int RunEvaluate(const std::string& config_path, const std::string& input,
                const std::string& report_dir, std::optional<uint64_t> seed,
                std::optional<int> threads) {
  absl::StatusOr<ProjectConfig> config = LoadConfig(config_path);
  if (!config.ok()) return Fail(kInputError, "config", config.status());
  absl::StatusOr<Dataset> data = LoadPrepared(*config, input);
  if (!data.ok()) return Fail(kInputError, "load", data.status());

  ExperimentConfig exp = config->experiment;
  if (seed) exp.master_seed = *seed;
  if (threads) exp.threads = *threads;
  if (absl::Status s = exp.Validate(); !s.ok()) {
    return Fail(kInputError, "config", s);
  }
  absl::StatusOr<FairnessReport> report =
      RunExperiment(*data, exp, config->sensitive);
  if (!report.ok()) return Fail(kPipelineError, "evaluate", report.status());
  if (absl::Status s = WriteReport(*report, report_dir); !s.ok()) {
    return Fail(kInputError, "write", s);
  }

  const MetricRow& b = report->median_before;
  const MetricRow& a = report->median_after;
  fmt::print("{:<13}{:>10}{:>10}\n", "median", "before", "after");
  auto line = [](std::string_view name, double x, double y) {
    fmt::print("{:<13}{:>10.4f}{:>10.4f}\n", name, x, y);
  };
  line("awi", b.awi_reported, a.awi_reported);
  line("accuracy", b.accuracy, a.accuracy);
  line("precision", b.precision, a.precision);
  line("recall", b.recall, a.recall);
  line("false_alarm", b.false_alarm, a.false_alarm);
  line("f1", b.f1, a.f1);
  return 0;
}

}  // namespace
}  // namespace fairloan

int main(int argc, char** argv) {
  CLI::App app{"Debiasing and fairness evaluation for loan decision data"};
  app.require_subcommand(1);

  std::string config;
  std::string input;
  std::string output;
  std::string report;
  std::string model;
  size_t rows = 0;
  std::optional<uint64_t> seed;
  std::optional<int> threads;

  CLI::App* prepare =
      app.add_subcommand("prepare", "Clean, encode and normalize a raw CSV");
  prepare->add_option("--config", config, "JSON config")->required();
  prepare->add_option("--input", input, "Raw CSV")->required();
  prepare->add_option("--output", output, "Cleaned CSV")->required();

  CLI::App* synth =
      app.add_subcommand("synth", "Generate a synthetic biased dataset");
  synth->add_option("--config", config, "JSON config")->required();
  synth->add_option("--rows", rows, "Number of rows")->required();
  synth->add_option("--seed", seed, "Generator seed (default: config seed)");
  synth->add_option("--output", output, "Output CSV")->required();

  CLI::App* debias = app.add_subcommand(
      "debias", "Balance and situation-test a dataset, export the result");
  debias->add_option("--config", config, "JSON config")->required();
  debias->add_option("--input", input, "Cleaned CSV")->required();
  debias->add_option("--output", output, "Repaired CSV")->required();
  debias->add_option("--model", model,
                     "Also fit a model on the repaired data and save it");
  debias->add_option("--seed", seed, "Seed (default: config seed)");
  debias->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Run the before/after experiment and write a report");
  evaluate->add_option("--config", config, "JSON config")->required();
  evaluate->add_option("--input", input, "Cleaned CSV")->required();
  evaluate->add_option("--report", report, "Report directory")->required();
  evaluate->add_option("--seed", seed, "Master seed (default: config seed)");
  evaluate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*prepare) return fairloan::RunPrepare(config, input, output);
  if (*synth) return fairloan::RunSynth(config, rows, seed, output);
  if (*debias) {
    return fairloan::RunDebias(config, input, output, model, seed, threads);
  }
  return fairloan::RunEvaluate(config, input, report, seed, threads);
}
