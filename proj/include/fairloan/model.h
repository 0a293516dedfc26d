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

#ifndef FAIRLOAN_MODEL_H_
#define FAIRLOAN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairloan/tabular.h"

namespace fairloan {

struct FitConfig {
  double learning_rate = 0.1;
  int max_epochs = 2000;
  double tolerance = 1e-8;  // Stop when |loss change| drops below this.
  double l2 = 1e-4;
  // Full-batch descent from zero weights is already deterministic; the seed
  // is carried for config compatibility.
  uint64_t seed = 0;

  absl::Status Validate() const;
};

// Binary logistic regression over every input column of a Dataset
// (sensitive columns included).
class ClassifierModel {
 public:
  ClassifierModel() = default;

  static absl::StatusOr<ClassifierModel> Create(
      std::vector<std::string> feature_order, std::vector<double> weights,
      double bias, double threshold = 0.5);

  const std::vector<std::string>& feature_order() const {
    return feature_order_;
  }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  double threshold() const { return threshold_; }

  // w . x + b. `inputs` must have one value per weight.
  double Logit(std::span<const double> inputs) const;

  absl::StatusOr<double> PredictProb(std::span<const double> inputs) const;
  // 1 iff the probability is >= threshold; ties go to the favorable label.
  absl::StatusOr<int> PredictLabel(std::span<const double> inputs) const;
  int LabelFromLogit(double logit) const;

  absl::StatusOr<std::vector<int>> PredictLabels(const Dataset& data) const;

  // Checks that the dataset's input columns are exactly feature_order.
  absl::Status CheckCompatible(const Dataset& data) const;

  bool operator==(const ClassifierModel&) const = default;

 private:
  std::vector<std::string> feature_order_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  double threshold_ = 0.5;
};

double Sigmoid(double z);

// Mean logistic loss plus l2 * |w|^2 / 2 (bias unpenalized) and its gradient.
struct Objective {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

// Rows are reduced in fixed-size blocks summed in block order, so the result
// is bitwise identical for any thread count.
Objective EvaluateObjective(const Dataset& data, std::span<const double> weights,
                            double bias, double l2, int threads = 1);

// Full-batch gradient descent from zero weights. Appends the loss of every
// epoch to `loss_trace` when given.
absl::StatusOr<ClassifierModel> Fit(const Dataset& train,
                                    const FitConfig& config, int threads = 1,
                                    std::vector<double>* loss_trace = nullptr);

// Line-oriented text format:
//
//   fairloan-logistic-model v1
//   threshold <value>
//   bias <value>
//   feature <name> <weight>      (one line per input, in order)
//
// Values use round-trip precision; names may not contain whitespace.
std::string SerializeModel(const ClassifierModel& model);
absl::StatusOr<ClassifierModel> ParseModel(std::string_view text);
absl::Status SaveModel(const ClassifierModel& model,
                       const std::filesystem::path& path);
absl::StatusOr<ClassifierModel> LoadModel(const std::filesystem::path& path);

}  // namespace fairloan

#endif  // FAIRLOAN_MODEL_H_
