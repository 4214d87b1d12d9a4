//
// Copyright 2026 The NeuGuard Lab Authors
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
//

#include "neuguard/nn/train.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "neuguard/data/dataset.h"

namespace neuguard::nn {
namespace {

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = (m + *std::max_element(v.begin(), v.begin() + mid)) / 2.0;
  }
  return m;
}

TrainResult TrainLoop(NetworkModel model, const Matrix& features,
                      std::span<const int> labels, const Matrix* targets,
                      const TrainConfig& config, const Matrix& eval_features,
                      std::span<const int> eval_labels) {
  const std::size_t n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw Error("empty training split");
  if (config.epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (config.batch_size <= 0) throw ConfigError("batch_size must be positive");

  TrainResult result;
  if (config.epochs == 0) {
    result.model = std::move(model);
    return result;
  }
  OptimizerState state = MakeOptimizerState(model, config.optimizer);
  std::vector<double> all_batch_seconds;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.hook != nullptr) config.hook->OnEpochBegin(epoch);
    const std::vector<std::size_t> order = EpochOrder(n, config.seed, epoch);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::vector<double> batch_seconds;

    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::vector<std::size_t> rows(order.begin() + start, order.begin() + end);
      const auto t0 = std::chrono::steady_clock::now();

      const Matrix x = data::GatherRows(features, rows);
      std::vector<int> y;
      Matrix t;
      LossSpec spec;
      spec.primary = config.loss;
      if (targets != nullptr) {
        t = data::GatherRows(*targets, rows);
        spec.targets = &t;
      } else {
        y.reserve(rows.size());
        for (std::size_t r : rows) y.push_back(labels[r]);
        spec.labels = y;
      }
      const ForwardTrace trace = ForwardWithTrace(model, x, config.train_scaler);
      if (config.hook != nullptr) {
        spec.auxiliary = config.hook->BatchTerms(trace, spec.labels);
      }
      const BackwardResult br = Backward(model, trace, spec);
      OptimizerStep(model, br.gradients, state, epoch);

      const auto t1 = std::chrono::steady_clock::now();
      batch_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

      loss_sum += br.loss.total * static_cast<double>(rows.size());
      for (Eigen::Index i = 0; i < trace.output.rows(); ++i) {
        if (targets != nullptr) {
          const bool predicted = trace.output(i, 0) >= 0.5;
          const bool actual = t(i, 0) >= 0.5;
          correct += predicted == actual;
        } else {
          correct += ArgMax(trace.output.row(i)) == y[i];
        }
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(n);
    entry.train_accuracy =
        static_cast<double>(correct) / static_cast<double>(n);
    if (eval_features.rows() > 0 && targets == nullptr) {
      entry.test_accuracy =
          Accuracy(model, eval_features, eval_labels, config.eval_scaler);
    }
    entry.median_batch_seconds = Median(batch_seconds);
    all_batch_seconds.insert(all_batch_seconds.end(), batch_seconds.begin(),
                             batch_seconds.end());
    result.log.push_back(entry);
  }
  CheckFinite(model);
  result.model = std::move(model);
  result.median_batch_seconds = Median(std::move(all_batch_seconds));
  return result;
}

}  // namespace

std::vector<std::size_t> EpochOrder(std::size_t n, std::uint64_t seed,
                                    int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(MixSeed(seed, static_cast<std::uint64_t>(epoch)));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

double Accuracy(const NetworkModel& model, const Matrix& features,
                std::span<const int> labels, const HiddenScaler* scaler) {
  if (features.rows() == 0) return 0.0;
  const Matrix out = Predict(model, features, scaler);
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    correct += ArgMax(out.row(i)) == labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(out.rows());
}

TrainResult TrainClassifier(NetworkModel model, const Matrix& features,
                            std::span<const int> labels,
                            const TrainConfig& config,
                            const Matrix& eval_features,
                            std::span<const int> eval_labels) {
  if (labels.size() != static_cast<std::size_t>(features.rows())) {
    throw Error("label count does not match feature rows");
  }
  return TrainLoop(std::move(model), features, labels, nullptr, config,
                   eval_features, eval_labels);
}

TrainResult TrainRegressor(NetworkModel model, const Matrix& features,
                           const Matrix& targets, const TrainConfig& config) {
  if (targets.rows() != features.rows()) {
    throw Error("target rows do not match feature rows");
  }
  TrainConfig c = config;
  c.loss = PrimaryLoss::kMeanSquaredError;
  return TrainLoop(std::move(model), features, {}, &targets, c, Matrix(), {});
}

TrainResult Train(NetworkModel model, const data::Dataset& dataset,
                  const TrainConfig& config) {
  if (!dataset.has_split(data::split::kTrain)) {
    throw Error("dataset has no 'train' split");
  }
  const Matrix x = dataset.SplitFeatures(data::split::kTrain);
  const std::vector<int> y = dataset.SplitLabels(data::split::kTrain);
  Matrix tx;
  std::vector<int> ty;
  if (dataset.has_split(data::split::kTest)) {
    tx = dataset.SplitFeatures(data::split::kTest);
    ty = dataset.SplitLabels(data::split::kTest);
  }
  return TrainClassifier(std::move(model), x, y, config, tx, ty);
}

}  // namespace neuguard::nn
