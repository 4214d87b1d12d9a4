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


#ifndef NEUGUARD_HARNESS_EXPERIMENT_H_
#define NEUGUARD_HARNESS_EXPERIMENT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/attacks/score_record.h"
#include "neuguard/data/dataset.h"
#include "neuguard/eval/histogram.h"
#include "neuguard/eval/metrics.h"
#include "neuguard/harness/config.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/train.h"

namespace neuguard::harness {

// Dataset with all six splits, reproducible from the data and split seeds.
data::Dataset BuildExperimentDataset(const ExperimentConfig& config);

// Untrained target model from the layer list; the input width is the
// dataset's, the last layer must be a Softmax with num_classes units.
nn::NetworkModel BuildTargetModel(const ExperimentConfig& config,
                                  const data::Dataset& dataset);

// Inference-time scaler demanded by the defense, or nullptr.
std::unique_ptr<nn::HiddenScaler> InferenceScaler(const ExperimentConfig& config);

nn::TrainResult TrainTarget(const ExperimentConfig& config,
                            const data::Dataset& dataset);

struct MetricAttackResult {
  double accuracy = 0.0;
  attacks::ThresholdSet thresholds;
};

struct AttackReport {
  std::string name;
  DefenseKind defense = DefenseKind::kNone;
  double train_accuracy = 0.0;  // full train split
  double test_accuracy = 0.0;   // full test split
  eval::AccuracyGap eval_gap;   // on the eval member / non-member sets
  double correctness_residual = 0.0;
  eval::ScoreVariance variance;  // eval sets
  eval::LossSummary member_loss;
  eval::LossSummary nonmember_loss;
  std::optional<double> correctness;
  std::map<std::string, MetricAttackResult> metric_attacks;
  std::optional<double> sorted_nn;
  std::optional<double> unsorted_nsh;
  std::optional<attacks::LabelOnlyResult> label_only;
  eval::DistanceReport modified_entropy_distance;
  int histogram_bins = 0;
  double inference_median_batch_seconds = 0.0;

  // Eval records, with boundary distances when label_only ran.
  std::vector<attacks::ScoreRecord> eval_members;
  std::vector<attacks::ScoreRecord> eval_nonmembers;
};

// Calibrates on the attacker-known splits and evaluates on the eval splits.
AttackReport RunAttacks(const ExperimentConfig& config,
                        const data::Dataset& dataset,
                        const nn::NetworkModel& model);

std::string AttackReportToJson(const AttackReport& report);

// Modified-entropy values of records, histogrammed on a shared range.
eval::DistanceReport ModifiedEntropyDistance(
    const std::vector<attacks::ScoreRecord>& a,
    const std::vector<attacks::ScoreRecord>& b, int bins);

}  // namespace neuguard::harness

#endif  // NEUGUARD_HARNESS_EXPERIMENT_H_
