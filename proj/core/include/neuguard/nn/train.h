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

#ifndef NEUGUARD_NN_TRAIN_H_
#define NEUGUARD_NN_TRAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neuguard/common.h"
#include "neuguard/nn/backward.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/model.h"
#include "neuguard/nn/optimizer.h"

namespace neuguard::data {
struct Dataset;
}

namespace neuguard::nn {

// Supplies extra loss terms per batch. Hooks may keep state across batches
// (e.g. running statistics) and must outlive the training call.
class TrainingHook {
 public:
  virtual ~TrainingHook() = default;
  virtual void OnEpochBegin(int /*epoch*/) {}
  // Called once per batch after the forward pass. Returned pointers must
  // stay valid until the next call.
  virtual std::vector<const AuxiliaryLoss*> BatchTerms(
      const ForwardTrace& trace, std::span<const int> labels) = 0;
};

struct TrainConfig {
  int epochs = 1;
  int batch_size = 64;
  std::uint64_t seed = 0;  // batch order
  OptimizerConfig optimizer;
  PrimaryLoss loss = PrimaryLoss::kCrossEntropy;
  // Applied to hidden outputs during training only.
  const HiddenScaler* train_scaler = nullptr;
  // Applied when measuring test accuracy for the log.
  const HiddenScaler* eval_scaler = nullptr;
  TrainingHook* hook = nullptr;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;      // mean total loss over batches
  double train_accuracy = 0.0;  // measured on the batches seen this epoch
  // Measured after the epoch on the evaluation set, when one is given.
  std::optional<double> test_accuracy;
  double median_batch_seconds = 0.0;
};

struct TrainResult {
  NetworkModel model;
  std::vector<EpochLog> log;
  // Median wall time of one forward/backward/step across the whole run.
  double median_batch_seconds = 0.0;
};

// Shuffle for `epoch`, seeded from MixSeed(seed, epoch).
std::vector<std::size_t> EpochOrder(std::size_t n, std::uint64_t seed,
                                    int epoch);

// Classification training on raw arrays. `eval_features`/`eval_labels` may
// be empty.
TrainResult TrainClassifier(NetworkModel model, const Matrix& features,
                            std::span<const int> labels,
                            const TrainConfig& config,
                            const Matrix& eval_features = Matrix(),
                            std::span<const int> eval_labels = {});

// Regression / binary training with MSE on `targets` (N x out). Accuracy in
// the log counts rows where (output >= 0.5) == (target >= 0.5).
TrainResult TrainRegressor(NetworkModel model, const Matrix& features,
                           const Matrix& targets, const TrainConfig& config);

// Trains on the "train" split; test accuracy is logged on "test" when that
// split exists. Throws Error when the train split is missing or empty.
TrainResult Train(NetworkModel model, const data::Dataset& dataset,
                  const TrainConfig& config);

// Fraction of rows where ArgMax(output) equals the label.
double Accuracy(const NetworkModel& model, const Matrix& features,
                std::span<const int> labels,
                const HiddenScaler* scaler = nullptr);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_TRAIN_H_
