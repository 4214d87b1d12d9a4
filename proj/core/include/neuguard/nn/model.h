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

#ifndef NEUGUARD_NN_MODEL_H_
#define NEUGUARD_NN_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "neuguard/common.h"

namespace neuguard::nn {

enum class Activation { kLinear, kTanh, kReLU, kSigmoid, kSoftmax };

std::string_view ActivationName(Activation activation);
// Accepts lower-case names ("linear", "tanh", "relu", "sigmoid", "softmax").
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  int in_width = 0;
  int out_width = 0;
  Activation activation = Activation::kLinear;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// A dense feed-forward network. Layer k maps in_width -> out_width with
// weights stored out_width x in_width.
struct NetworkModel {
  std::vector<LayerSpec> layers;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  std::uint64_t seed = 0;

  int num_layers() const { return static_cast<int>(layers.size()); }
  int input_width() const { return layers.front().in_width; }
  int output_width() const { return layers.back().out_width; }
  std::size_t num_parameters() const;
};

// Throws ConfigError when the chain is inconsistent, e.g.
// "width mismatch at layer 1->2". Layers are numbered from 1.
void ValidateLayerChain(const std::vector<LayerSpec>& layers);

// Builds and initializes a model. Weights are drawn uniformly from
// [-bound, bound] with bound = sqrt(6 / (in + out)) for Linear, Tanh,
// Sigmoid and Softmax layers and sqrt(6 / in) for ReLU layers. Biases start
// at zero. Identical (layers, seed) pairs give bit-identical models.
NetworkModel BuildModel(const std::vector<LayerSpec>& layers,
                        std::uint64_t seed);

// Convenience for chains: widths = {in, h1, ..., out}; hidden layers use
// `hidden`, the last layer uses `output`.
std::vector<LayerSpec> MakeChain(const std::vector<int>& widths,
                                 Activation hidden, Activation output);

// Throws NumericalError if any parameter is not finite.
void CheckFinite(const NetworkModel& model);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_MODEL_H_
