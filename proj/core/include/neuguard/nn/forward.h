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

#ifndef NEUGUARD_NN_FORWARD_H_
#define NEUGUARD_NN_FORWARD_H_

#include <vector>

#include "neuguard/common.h"
#include "neuguard/nn/model.h"

namespace neuguard::nn {

// Rescales hidden post-activation outputs in the forward pass. The scale
// chosen in the forward pass is treated as a constant by backpropagation.
class HiddenScaler {
 public:
  virtual ~HiddenScaler() = default;

  // `hidden` holds one sample per row for hidden layer `layer` (0-based).
  // Implementations multiply selected entries in place and write the
  // per-entry factor into `scale` (same shape, 1 where untouched). Leaving
  // `scale` empty means no entry was changed.
  virtual void Apply(int layer, Matrix& hidden, Matrix& scale) const = 0;
};

struct ForwardTrace {
  Matrix input;
  // Per layer pre-activation values; the last entry are the logits.
  std::vector<Matrix> pre_activations;
  // Hidden post-activation outputs h^1..h^{M-1}, after any scaling. These
  // are exactly what the following layer consumes.
  std::vector<Matrix> hidden;
  // Scale applied to each hidden layer; empty when none was applied.
  std::vector<Matrix> hidden_scale;
  // Final activation output. For Softmax networks these are the scores.
  Matrix output;

  const Matrix& logits() const { return pre_activations.back(); }
  const Matrix& scores() const { return output; }
  int batch_size() const { return static_cast<int>(input.rows()); }
};

// Row-wise softmax with max-logit subtraction.
Matrix Softmax(const Matrix& logits);

// Pure function of (model, batch). Throws ConfigError on a width mismatch
// and NumericalError on non-finite input or a non-finite intermediate,
// naming the layer.
ForwardTrace ForwardWithTrace(const NetworkModel& model, const Matrix& batch,
                              const HiddenScaler* scaler = nullptr);

// Final output only (no trace retained beyond what is needed).
Matrix Predict(const NetworkModel& model, const Matrix& batch,
               const HiddenScaler* scaler = nullptr);

// Index of the largest entry; lowest index on ties.
int ArgMax(const Eigen::Ref<const Eigen::RowVectorXd>& row);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_FORWARD_H_
