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

#include "neuguard/nn/forward.h"

#include <cmath>
#include <string>

#include "nn/activation_internal.h"

namespace neuguard::nn {

Matrix Softmax(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double max_logit = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const double e = std::exp(logits(i, j) - max_logit);
      out(i, j) = e;
      sum += e;
    }
    out.row(i) /= sum;
  }
  return out;
}

Matrix ApplyActivation(Activation activation, const Matrix& pre) {
  switch (activation) {
    case Activation::kLinear:
      return pre;
    case Activation::kTanh:
      return pre.array().tanh().matrix();
    case Activation::kReLU:
      return pre.array().max(0.0).matrix();
    case Activation::kSigmoid:
      return (1.0 / (1.0 + (-pre.array()).exp())).matrix();
    case Activation::kSoftmax:
      return Softmax(pre);
  }
  return pre;
}

ForwardTrace ForwardWithTrace(const NetworkModel& model, const Matrix& batch,
                              const HiddenScaler* scaler) {
  if (model.layers.empty()) throw ConfigError("empty model");
  if (batch.cols() != model.input_width()) {
    throw ConfigError("input width " + std::to_string(batch.cols()) +
                      " does not match model input width " +
                      std::to_string(model.input_width()));
  }
  if (!batch.allFinite()) throw NumericalError("non-finite input");

  ForwardTrace trace;
  trace.input = batch;
  const int m = model.num_layers();
  trace.pre_activations.reserve(m);
  trace.hidden.reserve(m - 1);
  trace.hidden_scale.reserve(m - 1);

  const Matrix* current = &trace.input;
  for (int k = 0; k < m; ++k) {
    Matrix pre = (*current) * model.weights[k].transpose();
    pre.rowwise() += model.biases[k].transpose();
    if (!pre.allFinite()) {
      throw NumericalError("non-finite pre-activation at layer " +
                           std::to_string(k + 1));
    }
    Matrix post = ApplyActivation(model.layers[k].activation, pre);
    trace.pre_activations.push_back(std::move(pre));
    if (k + 1 < m) {
      Matrix scale;
      if (scaler != nullptr) scaler->Apply(k, post, scale);
      if (!post.allFinite()) {
        throw NumericalError("non-finite output at layer " +
                             std::to_string(k + 1));
      }
      trace.hidden.push_back(std::move(post));
      trace.hidden_scale.push_back(std::move(scale));
      current = &trace.hidden.back();
    } else {
      if (!post.allFinite()) {
        throw NumericalError("non-finite output at layer " +
                             std::to_string(k + 1));
      }
      trace.output = std::move(post);
    }
  }
  return trace;
}

Matrix Predict(const NetworkModel& model, const Matrix& batch,
               const HiddenScaler* scaler) {
  return ForwardWithTrace(model, batch, scaler).output;
}

int ArgMax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  int best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row(j) > row(best)) best = static_cast<int>(j);
  }
  return best;
}

}  // namespace neuguard::nn
