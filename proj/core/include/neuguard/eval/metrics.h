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


#ifndef NEUGUARD_EVAL_METRICS_H_
#define NEUGUARD_EVAL_METRICS_H_

#include <string_view>
#include <vector>

#include "neuguard/attacks/score_record.h"
#include "neuguard/data/dataset.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/model.h"

namespace neuguard::eval {

struct AccuracyGap {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double gap = 0.0;  // train - test, may be negative
};

// Accuracies on two splits of `dataset` (train and test by default).
AccuracyGap ComputeAccuracyGap(const nn::NetworkModel& model,
                               const data::Dataset& dataset,
                               const nn::HiddenScaler* scaler = nullptr,
                               std::string_view member_split = data::split::kTrain,
                               std::string_view nonmember_split = data::split::kTest);
// Same quantity from score records; each side must be nonempty.
AccuracyGap ComputeAccuracyGap(const std::vector<attacks::ScoreRecord>& members,
                               const std::vector<attacks::ScoreRecord>& nonmembers);

// Predicted correctness-attack accuracy 0.5 * gap + 0.5.
double PredictedCorrectnessAccuracy(double gap);
// |correctness_acc - (0.5 * gap + 0.5)|.
double CorrectnessIdentityResidual(double correctness_accuracy, double gap);

// Population variance of the k components of one score vector.
double RecordScoreVariance(const attacks::ScoreRecord& record);

struct ScoreVariance {
  double members = 0.0;
  double nonmembers = 0.0;
  std::size_t num_members = 0;
  std::size_t num_nonmembers = 0;
};

// Mean per-record variance, separately for each side. A side without
// records reports 0.
ScoreVariance ComputeScoreVariance(const std::vector<attacks::ScoreRecord>& records);

struct LossSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  // 10th, 20th, ..., 90th percentiles, linearly interpolated between
  // order statistics.
  std::vector<double> deciles;
};

struct LossDistribution {
  std::vector<double> losses;  // -log(max(F(x)_y, 1e-30)) per record
  LossSummary summary;
};

// Throws Error on an empty record set.
LossDistribution ComputeLossDistribution(const std::vector<attacks::ScoreRecord>& records);

}  // namespace neuguard::eval

#endif  // NEUGUARD_EVAL_METRICS_H_
