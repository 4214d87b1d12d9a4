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

#include "neuguard/nn/model.h"

#include <cmath>
#include <random>
#include <string>

namespace neuguard::nn {

std::string_view ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kLinear:
      return "linear";
    case Activation::kTanh:
      return "tanh";
    case Activation::kReLU:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kSoftmax:
      return "softmax";
  }
  return "unknown";
}

Activation ParseActivation(std::string_view name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kReLU;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "softmax") return Activation::kSoftmax;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::size_t NetworkModel::num_parameters() const {
  std::size_t n = 0;
  for (const LayerSpec& layer : layers) {
    n += static_cast<std::size_t>(layer.out_width) * (layer.in_width + 1);
  }
  return n;
}

void ValidateLayerChain(const std::vector<LayerSpec>& layers) {
  if (layers.empty()) throw ConfigError("model needs at least one layer");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const LayerSpec& layer = layers[k];
    if (layer.in_width <= 0 || layer.out_width <= 0) {
      throw ConfigError("layer " + std::to_string(k + 1) +
                        " has a nonpositive width");
    }
    if (layer.activation == Activation::kSoftmax && k + 1 != layers.size()) {
      throw ConfigError("softmax is only allowed as the final activation (layer " +
                        std::to_string(k + 1) + ")");
    }
    if (k > 0 && layers[k - 1].out_width != layer.in_width) {
      throw ConfigError("width mismatch at layer " + std::to_string(k) + "->" +
                        std::to_string(k + 1));
    }
  }
}

NetworkModel BuildModel(const std::vector<LayerSpec>& layers,
                        std::uint64_t seed) {
  ValidateLayerChain(layers);
  NetworkModel model;
  model.layers = layers;
  model.seed = seed;
  std::mt19937_64 rng(seed);
  for (const LayerSpec& layer : layers) {
    const double fan_in = layer.in_width;
    const double fan_out = layer.out_width;
    const double bound = layer.activation == Activation::kReLU
                             ? std::sqrt(6.0 / fan_in)
                             : std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(layer.out_width, layer.in_width);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    model.weights.push_back(std::move(w));
    model.biases.push_back(Vector::Zero(layer.out_width));
  }
  return model;
}

std::vector<LayerSpec> MakeChain(const std::vector<int>& widths,
                                 Activation hidden, Activation output) {
  if (widths.size() < 2) throw ConfigError("chain needs at least two widths");
  std::vector<LayerSpec> layers;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
    const bool last = k + 2 == widths.size();
    layers.push_back({widths[k], widths[k + 1], last ? output : hidden});
  }
  return layers;
}

void CheckFinite(const NetworkModel& model) {
  for (int k = 0; k < model.num_layers(); ++k) {
    if (!model.weights[k].allFinite() || !model.biases[k].allFinite()) {
      throw NumericalError("non-finite parameter in layer " +
                           std::to_string(k + 1));
    }
  }
}

}  // namespace neuguard::nn
