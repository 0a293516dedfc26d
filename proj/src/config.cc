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

#include "fairloan/config.h"


#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "text.h"

namespace fairloan {
namespace {

using nlohmann::json;

absl::Status CheckKeys(const json& obj, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(
        text::StrCat("config: '", where, "' must be an object"));
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return absl::InvalidArgumentError(
          text::StrCat("config: unknown key '", key, "' in ", where));
    }
  }
  return absl::OkStatus();
}

template <typename T>
void ReadIf(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

absl::StatusOr<ProjectConfig> Build(const json& root) {
  if (absl::Status s = CheckKeys(
          root, "top level",
          {"columns", "sensitive", "missing_threshold", "missing_markers",
           "seed", "master_seed", "smote", "fit", "experiment", "synthetic"});
      !s.ok()) {
    return s;
  }
  ProjectConfig cfg;

  std::vector<ColumnSpec> columns;
  if (!root.contains("columns")) {
    return absl::InvalidArgumentError("config: 'columns' is required");
  }
  for (const json& c : root.at("columns")) {
    if (absl::Status s = CheckKeys(c, "columns[]", {"name", "kind", "domain"});
        !s.ok()) {
      return s;
    }
    ColumnSpec col;
    col.name = c.at("name").get<std::string>();
    absl::StatusOr<ColumnKind> kind =
        ParseColumnKind(c.value("kind", std::string("feature")));
    if (!kind.ok()) return kind.status();
    col.kind = *kind;
    ReadIf(c, "domain", col.domain);
    columns.push_back(std::move(col));
  }

  std::vector<SensitiveParameter> params;
  if (root.contains("sensitive")) {
    for (const json& p : root.at("sensitive")) {
      if (absl::Status s = CheckKeys(p, "sensitive[]", {"name", "options"});
          !s.ok()) {
        return s;
      }
      params.push_back({p.at("name").get<std::string>(),
                        p.at("options").get<std::vector<std::string>>()});
    }
    for (const SensitiveParameter& p : params) {
      auto it = std::find_if(columns.begin(), columns.end(),
                             [&](const ColumnSpec& c) { return c.name == p.name; });
      if (it == columns.end()) {
        return absl::InvalidArgumentError(text::StrCat(
            "config: sensitive parameter '", p.name, "' has no column"));
      }
      if (it->kind != ColumnKind::kSensitive) {
        return absl::InvalidArgumentError(text::StrCat(
            "config: column '", p.name, "' must have kind 'sensitive'"));
      }
      if (it->domain.empty()) {
        it->domain = p.options;
      } else if (it->domain != p.options) {
        return absl::InvalidArgumentError(text::StrCat(
            "config: domain of column '", p.name,
            "' differs from its sensitive options"));
      }
    }
    const size_t declared = std::count_if(
        columns.begin(), columns.end(),
        [](const ColumnSpec& c) { return c.kind == ColumnKind::kSensitive; });
    if (declared != params.size()) {
      return absl::InvalidArgumentError(
          "config: every sensitive column needs an entry in 'sensitive'");
    }
  } else {
    for (const ColumnSpec& c : columns) {
      if (c.kind == ColumnKind::kSensitive) params.push_back({c.name, c.domain});
    }
  }

  // Sensitive columns first, in parameter order; then the rest as listed.
  for (const SensitiveParameter& p : params) {
    cfg.columns.push_back(*std::find_if(
        columns.begin(), columns.end(),
        [&](const ColumnSpec& c) { return c.name == p.name; }));
  }
  for (const ColumnSpec& c : columns) {
    if (c.kind != ColumnKind::kSensitive) cfg.columns.push_back(c);
  }
  if (absl::Status s = ValidateSchema(cfg.columns); !s.ok()) {
    return absl::InvalidArgumentError(text::StrCat("config: ", s.message()));
  }
  absl::StatusOr<SensitiveSpec> spec = SensitiveSpec::Create(std::move(params));
  if (!spec.ok()) {
    return absl::InvalidArgumentError(
        text::StrCat("config: ", spec.status().message()));
  }
  cfg.sensitive = *std::move(spec);

  ReadIf(root, "missing_threshold", cfg.missing_threshold);
  ReadIf(root, "missing_markers", cfg.missing_markers);
  if (!(cfg.missing_threshold >= 0.0 && cfg.missing_threshold <= 1.0)) {
    return absl::InvalidArgumentError(
        "config: missing_threshold must lie in [0, 1]");
  }

  ExperimentConfig& exp = cfg.experiment;
  ReadIf(root, "seed", exp.master_seed);
  ReadIf(root, "master_seed", exp.master_seed);
  if (root.contains("smote")) {
    const json& s = root.at("smote");
    if (absl::Status st = CheckKeys(s, "smote", {"f", "cr", "k"}); !st.ok()) {
      return st;
    }
    ReadIf(s, "f", exp.smote.f);
    ReadIf(s, "cr", exp.smote.cr);
    ReadIf(s, "k", exp.smote.k);
  }
  if (root.contains("fit")) {
    const json& f = root.at("fit");
    if (absl::Status st = CheckKeys(
            f, "fit", {"learning_rate", "max_epochs", "tolerance", "l2"});
        !st.ok()) {
      return st;
    }
    ReadIf(f, "learning_rate", exp.fit.learning_rate);
    ReadIf(f, "max_epochs", exp.fit.max_epochs);
    ReadIf(f, "tolerance", exp.fit.tolerance);
    ReadIf(f, "l2", exp.fit.l2);
  }
  if (root.contains("experiment")) {
    const json& e = root.at("experiment");
    if (absl::Status st = CheckKeys(
            e, "experiment",
            {"split_fraction", "repeats", "repair_test", "threads"});
        !st.ok()) {
      return st;
    }
    ReadIf(e, "split_fraction", exp.split_fraction);
    ReadIf(e, "repeats", exp.repeats);
    ReadIf(e, "repair_test", exp.repair_test);
    ReadIf(e, "threads", exp.threads);
  }
  if (absl::Status s = exp.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(text::StrCat("config: ", s.message()));
  }

  if (root.contains("synthetic")) {
    const json& s = root.at("synthetic");
    if (absl::Status st = CheckKeys(
            s, "synthetic",
            {"label_bias_strength", "noise", "world_shift",
             "privileged_weight", "unprivileged_weight", "unprivileged"});
        !st.ok()) {
      return st;
    }
    SyntheticSettings& syn = cfg.synthetic;
    ReadIf(s, "label_bias_strength", syn.label_bias_strength);
    ReadIf(s, "noise", syn.noise);
    ReadIf(s, "world_shift", syn.world_shift);
    ReadIf(s, "privileged_weight", syn.privileged_weight);
    ReadIf(s, "unprivileged_weight", syn.unprivileged_weight);
    if (s.contains("unprivileged")) {
      const json& u = s.at("unprivileged");
      if (absl::Status st =
              CheckKeys(u, "synthetic.unprivileged", {"parameter", "options"});
          !st.ok()) {
        return st;
      }
      ReadIf(u, "parameter", syn.unprivileged_parameter);
      ReadIf(u, "options", syn.unprivileged_options);
    }
  }
  return cfg;
}

}  // namespace

absl::StatusOr<SyntheticSpec> ProjectConfig::MakeSyntheticSpec(
    size_t rows) const {
  SyntheticSpec spec;
  spec.n_rows = rows;
  spec.spec = sensitive;
  spec.feature_names.clear();
  for (const ColumnSpec& c : columns) {
    if (c.kind == ColumnKind::kFeature) {
      if (c.categorical()) {
        return absl::InvalidArgumentError(text::StrCat(
            "synthetic data supports numeric features only; '", c.name,
            "' is categorical"));
      }
      spec.feature_names.push_back(c.name);
    } else if (c.kind == ColumnKind::kLabel) {
      spec.label_name = c.name;
      spec.label_domain = c.domain;
    }
  }
  spec.n_features = spec.feature_names.size();

  const SyntheticSettings& syn = synthetic;
  size_t parameter = 0;
  if (!syn.unprivileged_parameter.empty()) {
    const auto& params = sensitive.parameters();
    auto it = std::find_if(params.begin(), params.end(), [&](const auto& p) {
      return p.name == syn.unprivileged_parameter;
    });
    if (it == params.end()) {
      return absl::InvalidArgumentError(text::StrCat(
          "synthetic.unprivileged.parameter '", syn.unprivileged_parameter,
          "' is not a sensitive parameter"));
    }
    parameter = it - params.begin();
  }
  const std::vector<std::string>& options =
      sensitive.parameters()[parameter].options;
  std::vector<int> codes;
  if (syn.unprivileged_options.empty()) {
    for (size_t o = 1; o < options.size(); ++o) codes.push_back(o);
  } else {
    for (const std::string& name : syn.unprivileged_options) {
      auto it = std::find(options.begin(), options.end(), name);
      if (it == options.end()) {
        return absl::InvalidArgumentError(
            text::StrCat("unknown unprivileged option '", name, "'"));
      }
      codes.push_back(it - options.begin());
    }
  }
  spec.unprivileged = WorldsWithOptions(sensitive, parameter, codes);
  spec.selection_skew = SkewByPrivilege(spec.unprivileged,
                                        syn.privileged_weight,
                                        syn.unprivileged_weight);
  spec.label_bias_strength = syn.label_bias_strength;
  spec.noise = syn.noise;
  spec.world_shift = syn.world_shift;
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  return spec;
}

absl::StatusOr<ProjectConfig> ParseConfig(std::string_view json_text) {
  try {
    return Build(json::parse(json_text));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(text::StrCat("config: ", e.what()));
  }
}

absl::StatusOr<ProjectConfig> LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        text::StrCat("cannot open config ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ProjectConfig> cfg = ParseConfig(buffer.str());
  if (!cfg.ok()) {
    return absl::Status(cfg.status().code(),
                        text::StrCat(path.string(), ": ",
                                     cfg.status().message()));
  }
  return cfg;
}

}  // namespace fairloan
