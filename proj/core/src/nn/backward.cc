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

#include "neuguard/nn/backward.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace neuguard::nn {
namespace {

// Derivative of the activation evaluated at `pre`, elementwise. Not used for
// Softmax (handled as a Jacobian-vector product).
Matrix ActivationDerivative(Activation activation, const Matrix& pre) {
  switch (activation) {
    case Activation::kLinear:
      return Matrix::Ones(pre.rows(), pre.cols());
    case Activation::kTanh: {
      Matrix t = pre.array().tanh().matrix();
      return (1.0 - t.array().square()).matrix();
    }
    case Activation::kReLU:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::kSigmoid: {
      Matrix s = (1.0 / (1.0 + (-pre.array()).exp())).matrix();
      return (s.array() * (1.0 - s.array())).matrix();
    }
    case Activation::kSoftmax:
      break;
  }
  throw Error("softmax derivative requested for a hidden layer");
}

double PrimaryLossValue(const ForwardTrace& trace, const LossSpec& spec) {
  const Matrix& out = trace.output;
  const double n = static_cast<double>(out.rows());
  switch (spec.primary) {
    case PrimaryLoss::kNone:
      return 0.0;
    case PrimaryLoss::kCrossEntropy: {
      if (spec.labels.size() != static_cast<std::size_t>(out.rows())) {
        throw Error("label count does not match batch size");
      }
      double sum = 0.0;
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const int y = spec.labels[i];
        if (y < 0 || y >= out.cols()) {
          throw Error("label " + std::to_string(y) + " out of range");
        }
        sum -= std::log(std::max(out(i, y), kLogFloor));
      }
      return sum / n;
    }
    case PrimaryLoss::kMeanSquaredError: {
      if (spec.targets == nullptr || spec.targets->rows() != out.rows() ||
          spec.targets->cols() != out.cols()) {
        throw Error("regression targets do not match output shape");
      }
      return (out - *spec.targets).squaredNorm() / n;
    }
  }
  return 0.0;
}

}  // namespace

Gradients Gradients::ZerosLike(const NetworkModel& model) {
  Gradients g;
  for (int k = 0; k < model.num_layers(); ++k) {
    g.weights.push_back(
        Matrix::Zero(model.weights[k].rows(), model.weights[k].cols()));
    g.biases.push_back(Vector::Zero(model.biases[k].size()));
  }
  return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    weights[k] += other.weights[k];
    biases[k] += other.biases[k];
  }
  return *this;
}

ActivationGradients ActivationGradients::ZerosLike(const ForwardTrace& trace) {
  ActivationGradients g;
  for (const Matrix& h : trace.hidden) {
    g.hidden.push_back(Matrix::Zero(h.rows(), h.cols()));
  }
  g.output = Matrix::Zero(trace.output.rows(), trace.output.cols());
  return g;
}

LossBreakdown EvaluateLoss(const ForwardTrace& trace, const LossSpec& spec) {
  LossBreakdown loss;
  loss.primary = PrimaryLossValue(trace, spec);
  loss.total = loss.primary;
  for (const AuxiliaryLoss* term : spec.auxiliary) {
    const double v = term->Evaluate(trace, spec.labels, nullptr);
    loss.auxiliary.push_back(v);
    loss.total += v;
  }
  if (!std::isfinite(loss.total)) throw NumericalError("non-finite loss");
  return loss;
}

Matrix OutputToLogitGradient(Activation activation, const Matrix& logits,
                             const Matrix& output,
                             const Matrix& output_gradient) {
  switch (activation) {
    case Activation::kLinear:
      return output_gradient;
    case Activation::kTanh:
      return (output_gradient.array() * (1.0 - output.array().square()))
          .matrix();
    case Activation::kReLU:
      return (output_gradient.array() * (logits.array() > 0.0).cast<double>())
          .matrix();
    case Activation::kSigmoid:
      return (output_gradient.array() * output.array() *
              (1.0 - output.array()))
          .matrix();
    case Activation::kSoftmax: {
      // J^T g = s * (g - <g, s>) per row.
      Matrix result(output.rows(), output.cols());
      for (Eigen::Index i = 0; i < output.rows(); ++i) {
        const double dot = output_gradient.row(i).dot(output.row(i));
        result.row(i) = (output.row(i).array() *
                         (output_gradient.row(i).array() - dot))
                            .matrix();
      }
      return result;
    }
  }
  return output_gradient;
}

BackwardResult BackpropagateLogits(const NetworkModel& model,
                                   const ForwardTrace& trace,
                                   const Matrix& logit_gradient,
                                   const std::vector<Matrix>& hidden_gradient,
                                   bool want_input_gradient) {
  const int m = model.num_layers();
  BackwardResult result;
  result.gradients.weights.resize(m);
  result.gradients.biases.resize(m);

  Matrix delta = logit_gradient;
  for (int k = m - 1; k >= 0; --k) {
    const Matrix& layer_input = k == 0 ? trace.input : trace.hidden[k - 1];
    result.gradients.weights[k] = delta.transpose() * layer_input;
    result.gradients.biases[k] = delta.colwise().sum().transpose();
    if (k == 0 && !want_input_gradient) break;
    Matrix upstream = delta * model.weights[k];
    if (k == 0) {
      result.input_gradient = std::move(upstream);
      break;
    }
    const int h = k - 1;
    if (h < static_cast<int>(hidden_gradient.size()) &&
        hidden_gradient[h].size() != 0) {
      upstream += hidden_gradient[h];
    }
    if (trace.hidden_scale[h].size() != 0) {
      upstream.array() *= trace.hidden_scale[h].array();
    }
    delta = (upstream.array() *
             ActivationDerivative(model.layers[h].activation,
                                  trace.pre_activations[h])
                 .array())
                .matrix();
  }
  return result;
}

BackwardResult Backward(const NetworkModel& model, const ForwardTrace& trace,
                        const LossSpec& spec, bool want_input_gradient) {
  const Matrix& out = trace.output;
  const double n = static_cast<double>(out.rows());
  const Activation final_activation = model.layers.back().activation;

  LossBreakdown loss;
  loss.primary = PrimaryLossValue(trace, spec);
  loss.total = loss.primary;

  Matrix logit_gradient = Matrix::Zero(out.rows(), out.cols());
  switch (spec.primary) {
    case PrimaryLoss::kNone:
      break;
    case PrimaryLoss::kCrossEntropy: {
      if (final_activation != Activation::kSoftmax) {
        throw Error("cross-entropy requires a softmax output layer");
      }
      logit_gradient = out / n;
      for (Eigen::Index i = 0; i < out.rows(); ++i) {
        logit_gradient(i, spec.labels[i]) -= 1.0 / n;
      }
      break;
    }
    case PrimaryLoss::kMeanSquaredError: {
      const Matrix d_out = 2.0 * (out - *spec.targets) / n;
      logit_gradient = OutputToLogitGradient(final_activation, trace.logits(),
                                             out, d_out);
      break;
    }
  }

  std::vector<Matrix> hidden_gradient;
  if (!spec.auxiliary.empty()) {
    ActivationGradients aux = ActivationGradients::ZerosLike(trace);
    for (const AuxiliaryLoss* term : spec.auxiliary) {
      const double v = term->Evaluate(trace, spec.labels, &aux);
      loss.auxiliary.push_back(v);
      loss.total += v;
    }
    logit_gradient += OutputToLogitGradient(final_activation, trace.logits(),
                                            out, aux.output);
    hidden_gradient = std::move(aux.hidden);
  }
  if (!std::isfinite(loss.total)) throw NumericalError("non-finite loss");

  BackwardResult result = BackpropagateLogits(model, trace, logit_gradient,
                                              hidden_gradient,
                                              want_input_gradient);
  result.loss = std::move(loss);
  return result;
}

BackwardResult Backward(const NetworkModel& model, const Matrix& batch,
                        const LossSpec& spec, const HiddenScaler* scaler) {
  return Backward(model, ForwardWithTrace(model, batch, scaler), spec);
}

}  // namespace neuguard::nn
