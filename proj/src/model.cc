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

#include "fairloan/model.h"


#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fairloan/parallel.h"
#include "fmt/printf.h"
#include "text.h"

namespace fairloan {
namespace {

constexpr size_t kBlockRows = 2048;
constexpr std::string_view kModelMagic = "fairloan-logistic-model v1";

double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

absl::Status FitConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    return absl::InvalidArgumentError("fit.learning_rate must be > 0");
  }
  if (max_epochs < 1) {
    return absl::InvalidArgumentError("fit.max_epochs must be >= 1");
  }
  if (!(tolerance >= 0.0)) {
    return absl::InvalidArgumentError("fit.tolerance must be >= 0");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) {
    return absl::InvalidArgumentError("fit.l2 must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<ClassifierModel> ClassifierModel::Create(
    std::vector<std::string> feature_order, std::vector<double> weights,
    double bias, double threshold) {
  if (feature_order.size() != weights.size()) {
    return absl::InvalidArgumentError(fmt::sprintf(
        "%d weights for %d features", weights.size(), feature_order.size()));
  }
  if (!std::all_of(weights.begin(), weights.end(),
                   [](double w) { return std::isfinite(w); }) ||
      !std::isfinite(bias)) {
    return absl::InvalidArgumentError("model parameters must be finite");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    return absl::InvalidArgumentError("threshold must lie in [0, 1]");
  }
  ClassifierModel m;
  m.feature_order_ = std::move(feature_order);
  m.weights_ = std::move(weights);
  m.bias_ = bias;
  m.threshold_ = threshold;
  return m;
}

double ClassifierModel::Logit(std::span<const double> inputs) const {
  double z = bias_;
  for (size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * inputs[j];
  return z;
}

int ClassifierModel::LabelFromLogit(double logit) const {
  return Sigmoid(logit) >= threshold_ ? 1 : 0;
}

absl::StatusOr<double> ClassifierModel::PredictProb(
    std::span<const double> inputs) const {
  if (inputs.size() != weights_.size()) {
    return absl::InvalidArgumentError(fmt::sprintf(
        "feature mismatch: model expects %d inputs, got %d", weights_.size(),
        inputs.size()));
  }
  return Sigmoid(Logit(inputs));
}

absl::StatusOr<int> ClassifierModel::PredictLabel(
    std::span<const double> inputs) const {
  absl::StatusOr<double> p = PredictProb(inputs);
  if (!p.ok()) return p.status();
  return *p >= threshold_ ? 1 : 0;
}

absl::Status ClassifierModel::CheckCompatible(const Dataset& data) const {
  if (data.input_names() != feature_order_) {
    return absl::InvalidArgumentError(
        "feature mismatch: dataset inputs differ from the model's features");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<int>> ClassifierModel::PredictLabels(
    const Dataset& data) const {
  if (absl::Status s = CheckCompatible(data); !s.ok()) return s;
  std::vector<int> labels(data.num_rows());
  for (size_t r = 0; r < data.num_rows(); ++r) {
    labels[r] = LabelFromLogit(Logit(data.inputs(r)));
  }
  return labels;
}

Objective EvaluateObjective(const Dataset& data, std::span<const double> weights,
                            double bias, double l2, int threads) {
  const size_t n = data.num_rows();
  const size_t dim = weights.size();
  const size_t blocks = (n + kBlockRows - 1) / kBlockRows;

  struct Partial {
    double loss = 0.0;
    double bias_grad = 0.0;
    std::vector<double> grad;
  };
  std::vector<Partial> partials(blocks);
  ParallelFor(blocks, threads, [&](size_t b) {
    Partial& p = partials[b];
    p.grad.assign(dim, 0.0);
    const size_t end = std::min(n, (b + 1) * kBlockRows);
    for (size_t r = b * kBlockRows; r < end; ++r) {
      const auto x = data.inputs(r);
      double z = bias;
      for (size_t j = 0; j < dim; ++j) z += weights[j] * x[j];
      const double y = data.label(r);
      p.loss += Softplus(z) - y * z;
      const double residual = Sigmoid(z) - y;
      p.bias_grad += residual;
      for (size_t j = 0; j < dim; ++j) p.grad[j] += residual * x[j];
    }
  });

  Objective obj;
  obj.weight_gradient.assign(dim, 0.0);
  for (const Partial& p : partials) {
    obj.loss += p.loss;
    obj.bias_gradient += p.bias_grad;
    for (size_t j = 0; j < dim; ++j) obj.weight_gradient[j] += p.grad[j];
  }
  const double inv_n = n > 0 ? 1.0 / n : 0.0;
  obj.loss *= inv_n;
  obj.bias_gradient *= inv_n;
  double norm2 = 0.0;
  for (size_t j = 0; j < dim; ++j) {
    obj.weight_gradient[j] = obj.weight_gradient[j] * inv_n + l2 * weights[j];
    norm2 += weights[j] * weights[j];
  }
  obj.loss += 0.5 * l2 * norm2;
  return obj;
}

absl::StatusOr<ClassifierModel> Fit(const Dataset& train,
                                    const FitConfig& config, int threads,
                                    std::vector<double>* loss_trace) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (train.num_rows() == 0) {
    return absl::FailedPreconditionError("training set is empty");
  }
  bool has[2] = {false, false};
  for (size_t r = 0; r < train.num_rows() && !(has[0] && has[1]); ++r) {
    has[train.label(r)] = true;
  }
  if (!has[0] || !has[1]) {
    return absl::FailedPreconditionError(
        "training set contains a single class");
  }

  std::vector<double> w(train.num_inputs(), 0.0);
  double b = 0.0;
  double previous = INFINITY;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const Objective obj = EvaluateObjective(train, w, b, config.l2, threads);
    if (!std::isfinite(obj.loss)) {
      return absl::InternalError(text::StrCat(
          "logistic regression diverged at epoch ", epoch,
          "; lower the learning rate"));
    }
    if (loss_trace) loss_trace->push_back(obj.loss);
    if (std::abs(previous - obj.loss) < config.tolerance) break;
    previous = obj.loss;
    for (size_t j = 0; j < w.size(); ++j) {
      w[j] -= config.learning_rate * obj.weight_gradient[j];
    }
    b -= config.learning_rate * obj.bias_gradient;
  }
  return ClassifierModel::Create(train.input_names(), std::move(w), b);
}

std::string SerializeModel(const ClassifierModel& model) {
  std::string out = text::StrCat(kModelMagic, "\n");
  out += fmt::sprintf("threshold %.17g\n", model.threshold());
  out += fmt::sprintf("bias %.17g\n", model.bias());
  for (size_t j = 0; j < model.weights().size(); ++j) {
    out += fmt::sprintf("feature %s %.17g\n", model.feature_order()[j],
                          model.weights()[j]);
  }
  return out;
}

absl::StatusOr<ClassifierModel> ParseModel(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : text::Split(text, '\n')) {
    if (!text::Trim(line).empty()) lines.push_back(line);
  }
  if (lines.empty() || text::Trim(lines[0]) != kModelMagic) {
    return absl::InvalidArgumentError("not a fairloan model file");
  }
  double threshold = 0.5;
  double bias = 0.0;
  bool saw_bias = false;
  std::vector<std::string> names;
  std::vector<double> weights;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string_view> tok = text::SplitWhitespace(lines[i]);
    auto bad = [&] {
      return absl::InvalidArgumentError(
          text::StrCat("malformed model line ", i + 1, ": ", lines[i]));
    };
    if (tok.size() == 2 && tok[0] == "threshold") {
      if (!text::ParseDouble(tok[1], &threshold)) return bad();
    } else if (tok.size() == 2 && tok[0] == "bias") {
      if (!text::ParseDouble(tok[1], &bias)) return bad();
      saw_bias = true;
    } else if (tok.size() == 3 && tok[0] == "feature") {
      double w;
      if (!text::ParseDouble(tok[2], &w)) return bad();
      names.emplace_back(tok[1]);
      weights.push_back(w);
    } else {
      return bad();
    }
  }
  if (!saw_bias) return absl::InvalidArgumentError("model file lacks a bias");
  return ClassifierModel::Create(std::move(names), std::move(weights), bias,
                                 threshold);
}

absl::Status SaveModel(const ClassifierModel& model,
                       const std::filesystem::path& path) {
  for (const std::string& name : model.feature_order()) {
    if (name.find_first_of(" \t\r\n") != std::string::npos) {
      return absl::InvalidArgumentError(
          text::StrCat("feature name '", name, "' contains whitespace"));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        text::StrCat("cannot open ", path.string(), " for writing"));
  }
  out << SerializeModel(model);
  return out ? absl::OkStatus() : absl::InternalError("model write failed");
}

absl::StatusOr<ClassifierModel> LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(text::StrCat("cannot open ", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

}  // namespace fairloan
