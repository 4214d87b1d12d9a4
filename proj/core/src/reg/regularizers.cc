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

#include "neuguard/reg/regularizers.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>
#include <string>

namespace neuguard::reg {

std::string_view VarianceModeName(VarianceMode mode) {
  switch (mode) {
    case VarianceMode::kClassWise:
      return "class_wise";
    case VarianceMode::kBatchWise:
      return "batch_wise";
    case VarianceMode::kSingleSort:
      return "single_sort";
  }
  return "unknown";
}

VarianceMode ParseVarianceMode(std::string_view name) {
  if (name == "class_wise") return VarianceMode::kClassWise;
  if (name == "batch_wise") return VarianceMode::kBatchWise;
  if (name == "single_sort") return VarianceMode::kSingleSort;
  throw ConfigError("unknown variance mode '" + std::string(name) + "'");
}

void RegularizerConfig::Validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  for (double f : {amp_train_fraction, amp_infer_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ConfigError("amplification fractions must lie in [0, 1]");
    }
  }
  if (!(amp_factor >= 1.0)) throw ConfigError("amp_factor must be >= 1");
}

namespace {

// Descending order, lower index first among equal values.
std::vector<int> DescendingOrder(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](int a, int b) { return v(a) > v(b); });
  return order;
}

}  // namespace

Matrix VarianceTargets(const Matrix& scores, std::span<const int> labels,
                       const ClassMeanTracker& tracker, VarianceMode mode) {
  if (scores.rows() == 0) throw Error("variance of an empty batch");
  Matrix targets(scores.rows(), scores.cols());
  switch (mode) {
    case VarianceMode::kClassWise:
      if (labels.size() != static_cast<std::size_t>(scores.rows())) {
        throw Error("label count does not match score rows");
      }
      for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const int y = labels[i];
        if (y < 0 || y >= tracker.num_classes()) {
          throw Error("label " + std::to_string(y) + " out of range");
        }
        if (tracker.count(y) == 0) {
          throw Error("class " + std::to_string(y) +
                      " has no running mean yet");
        }
        targets.row(i) = tracker.mean(y).transpose();
      }
      break;
    case VarianceMode::kBatchWise:
      targets.rowwise() = scores.colwise().mean();
      break;
    case VarianceMode::kSingleSort: {
      if (tracker.sorted_count() == 0) {
        throw Error("sorted running mean is empty");
      }
      const Vector& sorted = tracker.sorted_mean();
      for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        const std::vector<int> order = DescendingOrder(scores.row(i));
        for (std::size_t j = 0; j < order.size(); ++j) {
          targets(i, order[j]) = sorted(static_cast<Eigen::Index>(j));
        }
      }
      break;
    }
  }
  return targets;
}

double VarianceLoss(const Matrix& scores, std::span<const int> labels,
                    const ClassMeanTracker& tracker, VarianceMode mode) {
  const Matrix targets = VarianceTargets(scores, labels, tracker, mode);
  return (scores - targets).squaredNorm() / static_cast<double>(scores.rows());
}

double VarianceTerm::Evaluate(const nn::ForwardTrace& trace,
                              std::span<const int> /*labels*/,
                              nn::ActivationGradients* grads) const {
  const Matrix& s = trace.output;
  if (s.rows() != targets_.rows() || s.cols() != targets_.cols()) {
    throw Error("variance targets do not match the batch");
  }
  const double n = static_cast<double>(s.rows());
  const Matrix diff = s - targets_;
  if (grads != nullptr && weight_ != 0.0) {
    grads->output += (2.0 * weight_ / n) * diff;
  }
  return weight_ * diff.squaredNorm() / n;
}

namespace {

// Per-sample (first half sum - second half sum).
Vector GroupDifference(const Matrix& h) {
  const Eigen::Index half = h.cols() / 2;
  return h.leftCols(half).rowwise().sum() -
         h.rightCols(h.cols() - half).rowwise().sum();
}

void WarnNarrowLayer() {
  static std::once_flag once;
  std::call_once(once, [] {
    std::clog << "neuguard: hidden layer narrower than 2 units contributes "
                 "nothing to the balanced-output term\n";
  });
}

}  // namespace

double BalancedOutputLoss(const nn::ForwardTrace& trace) {
  double total = 0.0;
  for (const Matrix& h : trace.hidden) {
    if (h.cols() < 2) {
      WarnNarrowLayer();
      continue;
    }
    total += GroupDifference(h).squaredNorm() / static_cast<double>(h.cols());
  }
  return total;
}

double BalancedOutputTerm::Evaluate(const nn::ForwardTrace& trace,
                                    std::span<const int> /*labels*/,
                                    nn::ActivationGradients* grads) const {
  double total = 0.0;
  for (std::size_t l = 0; l < trace.hidden.size(); ++l) {
    const Matrix& h = trace.hidden[l];
    if (h.cols() < 2) {
      WarnNarrowLayer();
      continue;
    }
    const double width = static_cast<double>(h.cols());
    const Vector diff = GroupDifference(h);
    total += diff.squaredNorm() / width;
    if (grads != nullptr && weight_ != 0.0) {
      const Eigen::Index half = h.cols() / 2;
      const Vector g = (2.0 * weight_ / width) * diff;
      Matrix& out = grads->hidden[l];
      out.leftCols(half).colwise() += g;
      out.rightCols(h.cols() - half).colwise() -= g;
    }
  }
  return weight_ * total;
}

int AmplifiedCount(int width, double fraction) {
  if (fraction <= 0.0) return 0;
  // The small slack keeps products such as 0.35 * 20 from rounding up.
  const double raw = std::ceil(fraction * width - 1e-9);
  return std::clamp(static_cast<int>(raw), 0, width);
}

Vector AmplifyTopFraction(const Vector& activations, double fraction,
                          double factor) {
  Vector out = activations;
  if (factor == 1.0) return out;
  const int count = AmplifiedCount(static_cast<int>(activations.size()), fraction);
  if (count == 0) return out;
  const std::vector<int> order = DescendingOrder(activations.transpose());
  for (int j = 0; j < count; ++j) out(order[j]) *= factor;
  return out;
}

TopFractionAmplifier::TopFractionAmplifier(double fraction, double factor)
    : fraction_(fraction), factor_(factor) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("amplification fraction must lie in [0, 1]");
  }
  if (!(factor >= 1.0)) throw ConfigError("amplification factor must be >= 1");
}

void TopFractionAmplifier::Apply(int /*layer*/, Matrix& hidden,
                                 Matrix& scale) const {
  if (is_identity()) return;
  const int count = AmplifiedCount(static_cast<int>(hidden.cols()), fraction_);
  if (count == 0) return;
  scale = Matrix::Ones(hidden.rows(), hidden.cols());
  for (Eigen::Index i = 0; i < hidden.rows(); ++i) {
    const std::vector<int> order = DescendingOrder(hidden.row(i));
    for (int j = 0; j < count; ++j) {
      hidden(i, order[j]) *= factor_;
      scale(i, order[j]) = factor_;
    }
  }
}

NeuGuardLossValue NeuGuardLoss(const nn::ForwardTrace& trace,
                               std::span<const int> labels,
                               const ClassMeanTracker& tracker,
                               const RegularizerConfig& config) {
  NeuGuardLossValue v;
  nn::LossSpec spec;
  spec.primary = nn::PrimaryLoss::kCrossEntropy;
  spec.labels = labels;
  v.cross_entropy = nn::EvaluateLoss(trace, spec).primary;
  v.balanced_output = BalancedOutputLoss(trace);
  v.variance =
      VarianceLoss(trace.output, labels, tracker, config.variance_mode);
  v.total = v.cross_entropy + config.alpha * v.balanced_output +
            config.beta * v.variance;
  if (!std::isfinite(v.total)) throw NumericalError("non-finite loss");
  return v;
}

double SuggestBeta(int num_classes) {
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
  return 10.0 * num_classes;
}

NeuGuardHook::NeuGuardHook(int num_classes, RegularizerConfig config)
    : config_(config), tracker_(num_classes), boc_(config.alpha) {
  config_.Validate();
}

void NeuGuardHook::OnEpochBegin(int epoch) {
  if (config_.reset_tracker_each_epoch && epoch > 0) tracker_.Reset();
}

std::vector<const nn::AuxiliaryLoss*> NeuGuardHook::BatchTerms(
    const nn::ForwardTrace& trace, std::span<const int> labels) {
  std::vector<const nn::AuxiliaryLoss*> terms;
  if (config_.alpha > 0.0) terms.push_back(&boc_);
  if (config_.beta > 0.0) {
    switch (config_.variance_mode) {
      case VarianceMode::kClassWise:
        tracker_.Update(trace.output, labels);
        break;
      case VarianceMode::kSingleSort:
        tracker_.UpdateSorted(trace.output);
        break;
      case VarianceMode::kBatchWise:
        break;
    }
    variance_ = std::make_unique<VarianceTerm>(
        config_.beta, VarianceTargets(trace.output, labels, tracker_,
                                      config_.variance_mode));
    terms.push_back(variance_.get());
  }
  return terms;
}

}  // namespace neuguard::reg
