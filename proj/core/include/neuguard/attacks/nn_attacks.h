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

#ifndef NEUGUARD_ATTACKS_NN_ATTACKS_H_
#define NEUGUARD_ATTACKS_NN_ATTACKS_H_

#include <cstdint>
#include <set>
#include <vector>

#include "neuguard/attacks/score_record.h"
#include "neuguard/nn/model.h"

namespace neuguard::attacks {

enum class AttackKind { kSortedNN, kUnsortedNSH };

// Learned membership classifiers. SortedNN holds one network on sorted
// scores; UnsortedNSH holds {score encoder, label encoder, combiner}.
struct AttackModel {
  AttackKind kind = AttackKind::kSortedNN;
  std::vector<nn::NetworkModel> networks;
  int num_classes = 0;
};

struct AttackTrainConfig {
  int epochs = 100;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::set<int> decay_epochs = {40, 90};
  double decay_factor = 0.1;
  std::uint64_t seed = 0;
  // SortedNN: hidden widths of the single network.
  std::vector<int> sorted_hidden = {512, 256, 128};
  // UnsortedNSH: encoder widths (shared by both encoders) and combiner
  // hidden widths.
  std::vector<int> encoder_widths = {512, 64};
  std::vector<int> combiner_hidden = {256, 64};
};

// 100 epochs, decay x0.1 at epochs 40 and 90.
AttackTrainConfig DefaultSortedNnConfig();
// 200 epochs, decay x0.1 at epoch 30.
AttackTrainConfig DefaultNshConfig();

// ReLU hidden layers, Sigmoid output, MSE on 1/0 membership targets, Adam.
// Throws Error if the records are all members or all non-members.
AttackModel TrainSortedNnAttack(const std::vector<ScoreRecord>& known,
                                const AttackTrainConfig& config);
AttackModel TrainUnsortedNshAttack(const std::vector<ScoreRecord>& known,
                                   const AttackTrainConfig& config);

// Membership probabilities b(.) for a batch of records.
std::vector<double> AttackProbabilities(const AttackModel& attack,
                                        const std::vector<ScoreRecord>& records);
// Member iff b(.) >= 0.5. Throws Error on a score width mismatch.
bool AttackPredict(const AttackModel& attack, const ScoreRecord& record);
bool IsMemberProbability(double probability);
// Balanced accuracy of the attack's predictions.
double AttackAccuracy(const AttackModel& attack,
                      const std::vector<ScoreRecord>& eval);

// Network inputs: descending-sorted scores, and one-hot labels.
Matrix SortedScoreInputs(const std::vector<ScoreRecord>& records);
Matrix OneHotLabels(const std::vector<ScoreRecord>& records, int num_classes);

}  // namespace neuguard::attacks

#endif  // NEUGUARD_ATTACKS_NN_ATTACKS_H_
