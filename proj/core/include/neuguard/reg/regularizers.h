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

#ifndef NEUGUARD_REG_REGULARIZERS_H_
#define NEUGUARD_REG_REGULARIZERS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuguard/common.h"
#include "neuguard/nn/backward.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/train.h"
#include "neuguard/reg/class_mean_tracker.h"

namespace neuguard::reg {

enum class VarianceMode { kClassWise, kBatchWise, kSingleSort };

std::string_view VarianceModeName(VarianceMode mode);
// "class_wise", "batch_wise", "single_sort".
VarianceMode ParseVarianceMode(std::string_view name);

struct RegularizerConfig {
  double alpha = 0.0;  // weight of the balanced-output term
  double beta = 0.0;   // weight of the variance term
  VarianceMode variance_mode = VarianceMode::kClassWise;
  double amp_train_fraction = 0.0;
  double amp_infer_fraction = 0.0;
  double amp_factor = 1.0;
  // Ablation switch; the default keeps the means for the whole run.
  bool reset_tracker_each_epoch = false;

  // Throws ConfigError on negative weights, fractions outside [0, 1] or a
  // factor below 1.
  void Validate() const;
};

// ---------------------------------------------------------------------------
// Variance minimization.

// Per-row target vectors, in the rows' own component order, that the
// variance term pulls each score vector towards:
//   kClassWise  -> mu_{y_i} from the tracker (count must be > 0)
//   kBatchWise  -> mean of the batch
//   kSingleSort -> tracker's sorted mean, scattered back through each
//                  row's descending order
Matrix VarianceTargets(const Matrix& scores, std::span<const int> labels,
                       const ClassMeanTracker& tracker, VarianceMode mode);

// (1/N) sum_i ||scores_i - target_i||^2. Throws Error on an empty batch.
double VarianceLoss(const Matrix& scores, std::span<const int> labels,
                    const ClassMeanTracker& tracker, VarianceMode mode);

// Weighted variance term with fixed targets; targets receive no gradient.
class VarianceTerm : public nn::AuxiliaryLoss {
 public:
  VarianceTerm(double weight, Matrix targets)
      : weight_(weight), targets_(std::move(targets)) {}
  std::string name() const override { return "variance"; }
  double Evaluate(const nn::ForwardTrace& trace, std::span<const int> labels,
                  nn::ActivationGradients* grads) const override;

 private:
  double weight_;
  Matrix targets_;
};

// ---------------------------------------------------------------------------
// Layer-wise balanced output control.

// sum over hidden layers l of (1/S_l) * sum_n (A_n - B_n)^2 where A_n sums
// the first floor(S_l/2) outputs of sample n and B_n the rest. The final
// layer is excluded; layers narrower than 2 contribute 0.
double BalancedOutputLoss(const nn::ForwardTrace& trace);

class BalancedOutputTerm : public nn::AuxiliaryLoss {
 public:
  explicit BalancedOutputTerm(double weight) : weight_(weight) {}
  std::string name() const override { return "balanced_output"; }
  double Evaluate(const nn::ForwardTrace& trace, std::span<const int> labels,
                  nn::ActivationGradients* grads) const override;

 private:
  double weight_;
};

// ---------------------------------------------------------------------------
// Top-fraction activation amplification.

// Number of entries selected out of `width` for a fraction.
int AmplifiedCount(int width, double fraction);

// Multiplies the ceil(fraction * S) largest entries (by value, lower index
// first on ties) by `factor`.
Vector AmplifyTopFraction(const Vector& activations, double fraction,
                          double factor);

// Applies AmplifyTopFraction to every row of every hidden layer.
class TopFractionAmplifier : public nn::HiddenScaler {
 public:
  TopFractionAmplifier(double fraction, double factor);
  void Apply(int layer, Matrix& hidden, Matrix& scale) const override;
  bool is_identity() const { return fraction_ == 0.0 || factor_ == 1.0; }

 private:
  double fraction_;
  double factor_;
};

// ---------------------------------------------------------------------------
// Combined objective.

struct NeuGuardLossValue {
  double total = 0.0;
  double cross_entropy = 0.0;
  double balanced_output = 0.0;  // unweighted
  double variance = 0.0;         // unweighted
};

// cross-entropy + alpha * L_boc + beta * L_var. The tracker must already
// include this batch's scores.
NeuGuardLossValue NeuGuardLoss(const nn::ForwardTrace& trace,
                               std::span<const int> labels,
                               const ClassMeanTracker& tracker,
                               const RegularizerConfig& config);

// Starting point for beta: 10 x number of classes.
double SuggestBeta(int num_classes);

// Training hook implementing the per-batch loss calculation: update the
// running means with the batch scores, then emit the balanced-output and
// variance terms against the updated means.
class NeuGuardHook : public nn::TrainingHook {
 public:
  NeuGuardHook(int num_classes, RegularizerConfig config);

  void OnEpochBegin(int epoch) override;
  std::vector<const nn::AuxiliaryLoss*> BatchTerms(
      const nn::ForwardTrace& trace, std::span<const int> labels) override;

  const ClassMeanTracker& tracker() const { return tracker_; }
  const RegularizerConfig& config() const { return config_; }

 private:
  RegularizerConfig config_;
  ClassMeanTracker tracker_;
  BalancedOutputTerm boc_;
  std::unique_ptr<VarianceTerm> variance_;
};

}  // namespace neuguard::reg

#endif  // NEUGUARD_REG_REGULARIZERS_H_
