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


#include "neuguard/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/nn/train.h"

namespace neuguard::eval {
namespace {

double FractionCorrect(const std::vector<attacks::ScoreRecord>& records) {
  std::size_t correct = 0;
  for (const auto& r : records) correct += r.correct() ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

// Linear interpolation between order statistics of sorted values.
double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

AccuracyGap ComputeAccuracyGap(const nn::NetworkModel& model,
                               const data::Dataset& dataset,
                               const nn::HiddenScaler* scaler,
                               std::string_view member_split,
                               std::string_view nonmember_split) {
  AccuracyGap g;
  g.train_accuracy = nn::Accuracy(model, dataset.SplitFeatures(member_split),
                                  dataset.SplitLabels(member_split), scaler);
  g.test_accuracy = nn::Accuracy(model, dataset.SplitFeatures(nonmember_split),
                                 dataset.SplitLabels(nonmember_split), scaler);
  g.gap = g.train_accuracy - g.test_accuracy;
  return g;
}

AccuracyGap ComputeAccuracyGap(const std::vector<attacks::ScoreRecord>& members,
                               const std::vector<attacks::ScoreRecord>& nonmembers) {
  if (members.empty() || nonmembers.empty()) {
    throw Error("accuracy gap needs members and non-members");
  }
  AccuracyGap g;
  g.train_accuracy = FractionCorrect(members);
  g.test_accuracy = FractionCorrect(nonmembers);
  g.gap = g.train_accuracy - g.test_accuracy;
  return g;
}

double PredictedCorrectnessAccuracy(double gap) { return 0.5 * gap + 0.5; }

double CorrectnessIdentityResidual(double correctness_accuracy, double gap) {
  return std::abs(correctness_accuracy - PredictedCorrectnessAccuracy(gap));
}

double RecordScoreVariance(const attacks::ScoreRecord& record) {
  if (record.scores.size() == 0) throw Error("empty score vector");
  const double mean = record.scores.mean();
  return (record.scores.array() - mean).square().mean();
}

ScoreVariance ComputeScoreVariance(const std::vector<attacks::ScoreRecord>& records) {
  ScoreVariance v;
  for (const auto& r : records) {
    const double var = RecordScoreVariance(r);
    if (r.is_member) {
      v.members += var;
      ++v.num_members;
    } else {
      v.nonmembers += var;
      ++v.num_nonmembers;
    }
  }
  if (v.num_members > 0) v.members /= static_cast<double>(v.num_members);
  if (v.num_nonmembers > 0) v.nonmembers /= static_cast<double>(v.num_nonmembers);
  return v;
}

LossDistribution ComputeLossDistribution(
    const std::vector<attacks::ScoreRecord>& records) {
  if (records.empty()) throw Error("loss distribution of an empty record set");
  LossDistribution d;
  d.losses.reserve(records.size());
  for (const auto& r : records) {
    d.losses.push_back(-attacks::SafeLog(attacks::MetricConfidence(r)));
  }
  std::vector<double> sorted = d.losses;
  std::sort(sorted.begin(), sorted.end());
  d.summary.min = sorted.front();
  d.summary.max = sorted.back();
  double sum = 0.0;
  for (double l : sorted) sum += l;
  d.summary.mean = sum / static_cast<double>(sorted.size());
  for (int i = 1; i <= 9; ++i) d.summary.deciles.push_back(Quantile(sorted, i / 10.0));
  return d;
}

}  // namespace neuguard::eval
