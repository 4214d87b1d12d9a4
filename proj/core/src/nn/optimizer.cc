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

#include "neuguard/nn/optimizer.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace neuguard::nn {
namespace {

void CheckShapes(const NetworkModel& model, const Gradients& g) {
  if (g.weights.size() != model.weights.size() ||
      g.biases.size() != model.biases.size()) {
    throw Error("gradient layer count does not match model");
  }
  for (std::size_t k = 0; k < g.weights.size(); ++k) {
    if (g.weights[k].rows() != model.weights[k].rows() ||
        g.weights[k].cols() != model.weights[k].cols() ||
        g.biases[k].size() != model.biases[k].size()) {
      throw Error("gradient shape mismatch at layer " + std::to_string(k + 1));
    }
  }
}

template <typename Param, typename Grad>
void AdamUpdate(Param& theta, const Grad& g, Param& m, Param& v,
                const OptimizerConfig& c, double lr, double bias1,
                double bias2) {
  m = c.adam_beta1 * m + (1.0 - c.adam_beta1) * g;
  v = c.adam_beta2 * v + (1.0 - c.adam_beta2) * g.cwiseProduct(g);
  theta.array() -= lr * (m.array() / bias1) /
                   ((v.array() / bias2).sqrt() + c.adam_epsilon);
}

}  // namespace

OptimizerState MakeOptimizerState(const NetworkModel& model,
                                  const OptimizerConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(config.decay_factor > 0.0 && config.decay_factor <= 1.0)) {
    throw ConfigError("decay factor must lie in (0, 1]");
  }
  OptimizerState state;
  state.config = config;
  state.learning_rate = config.learning_rate;
  if (config.kind == OptimizerKind::kAdam) {
    state.first_moment = Gradients::ZerosLike(model);
    state.second_moment = Gradients::ZerosLike(model);
  }
  return state;
}

void OptimizerStep(NetworkModel& model, const Gradients& gradients,
                   OptimizerState& state, int epoch) {
  CheckShapes(model, gradients);
  for (int e : state.config.decay_epochs) {
    if (e > state.epoch && e <= epoch) {
      state.learning_rate *= state.config.decay_factor;
    }
  }
  state.epoch = std::max(state.epoch, epoch);
  const double lr = state.learning_rate;

  if (state.config.kind == OptimizerKind::kSGD) {
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
      model.weights[k] -= lr * gradients.weights[k];
      model.biases[k] -= lr * gradients.biases[k];
    }
    return;
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(state.config.adam_beta1, t);
  const double bias2 = 1.0 - std::pow(state.config.adam_beta2, t);
  for (std::size_t k = 0; k < model.weights.size(); ++k) {
    AdamUpdate(model.weights[k], gradients.weights[k],
               state.first_moment.weights[k], state.second_moment.weights[k],
               state.config, lr, bias1, bias2);
    AdamUpdate(model.biases[k], gradients.biases[k],
               state.first_moment.biases[k], state.second_moment.biases[k],
               state.config, lr, bias1, bias2);
  }
}

}  // namespace neuguard::nn
