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

#ifndef NEUGUARD_NN_OPTIMIZER_H_
#define NEUGUARD_NN_OPTIMIZER_H_

#include <cstdint>
#include <set>

#include "neuguard/nn/backward.h"
#include "neuguard/nn/model.h"

namespace neuguard::nn {

enum class OptimizerKind { kSGD, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  // Learning rate is multiplied by decay_factor when training reaches
  // one of these (0-based) epochs.
  std::set<int> decay_epochs;
  double decay_factor = 0.1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
};

struct OptimizerState {
  OptimizerConfig config;
  double learning_rate = 0.0;  // current, after decay
  int epoch = 0;               // last epoch seen by OptimizerStep
  std::int64_t step = 0;       // Adam time step
  Gradients first_moment;
  Gradients second_moment;
};

// Validates the config (positive learning rate, decay factor in (0, 1]) and
// allocates moment accumulators shaped like the model.
OptimizerState MakeOptimizerState(const NetworkModel& model,
                                  const OptimizerConfig& config);

// Applies decay for every decay epoch in (state.epoch, epoch], then updates
// parameters in place:
//   SGD:  theta -= lr * g
//   Adam: bias-corrected first/second moment step.
// A zero gradient leaves SGD parameters bitwise unchanged.
void OptimizerStep(NetworkModel& model, const Gradients& gradients,
                   OptimizerState& state, int epoch);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_OPTIMIZER_H_
