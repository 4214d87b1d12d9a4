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

#ifndef NEUGUARD_NN_BACKWARD_H_
#define NEUGUARD_NN_BACKWARD_H_

#include <span>
#include <string>
#include <vector>

#include "neuguard/common.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/model.h"

namespace neuguard::nn {

// Parameter-shaped gradient arrays.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static Gradients ZerosLike(const NetworkModel& model);
  Gradients& operator+=(const Gradients& other);
};

// Additive loss derivatives with respect to captured activations.
struct ActivationGradients {
  // Same shapes as ForwardTrace::hidden; entries may be left empty.
  std::vector<Matrix> hidden;
  // Same shape as ForwardTrace::output; may be left empty.
  Matrix output;

  static ActivationGradients ZerosLike(const ForwardTrace& trace);
};

// A loss term computed from captured activations, e.g. a regularizer.
class AuxiliaryLoss {
 public:
  virtual ~AuxiliaryLoss() = default;
  virtual std::string name() const = 0;
  // Returns the (already weighted) term value. When `grads` is non-null the
  // term adds its derivative into it.
  virtual double Evaluate(const ForwardTrace& trace,
                          std::span<const int> labels,
                          ActivationGradients* grads) const = 0;
};

enum class PrimaryLoss {
  kNone,
  // Mean over the batch of -log(max(p_y, 1e-30)). Requires a Softmax output.
  kCrossEntropy,
  // Mean over the batch of the squared error summed over output units.
  kMeanSquaredError,
};

struct LossSpec {
  PrimaryLoss primary = PrimaryLoss::kCrossEntropy;
  std::span<const int> labels;          // kCrossEntropy
  const Matrix* targets = nullptr;      // kMeanSquaredError
  std::vector<const AuxiliaryLoss*> auxiliary;
};

struct LossBreakdown {
  double total = 0.0;
  double primary = 0.0;
  // One value per LossSpec::auxiliary entry, in order.
  std::vector<double> auxiliary;
};

struct BackwardResult {
  Gradients gradients;
  LossBreakdown loss;
  // dL/d(input batch); filled only when requested.
  Matrix input_gradient;
};

// Loss value without any gradient computation.
LossBreakdown EvaluateLoss(const ForwardTrace& trace, const LossSpec& spec);

// Gradient of the composite loss for an already computed trace. Throws
// NumericalError on a non-finite loss.
BackwardResult Backward(const NetworkModel& model, const ForwardTrace& trace,
                        const LossSpec& spec, bool want_input_gradient = false);

// Runs the forward pass first.
BackwardResult Backward(const NetworkModel& model, const Matrix& batch,
                        const LossSpec& spec,
                        const HiddenScaler* scaler = nullptr);

// Chain rule from a gradient on the final pre-activation values (logits)
// plus optional extra gradients on hidden outputs.
BackwardResult BackpropagateLogits(const NetworkModel& model,
                                   const ForwardTrace& trace,
                                   const Matrix& logit_gradient,
                                   const std::vector<Matrix>& hidden_gradient,
                                   bool want_input_gradient);

// Converts dL/d(output) to dL/d(logits) through the final activation.
Matrix OutputToLogitGradient(Activation activation, const Matrix& logits,
                             const Matrix& output,
                             const Matrix& output_gradient);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_BACKWARD_H_
