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

#ifndef NEUGUARD_ATTACKS_METRIC_ATTACKS_H_
#define NEUGUARD_ATTACKS_METRIC_ATTACKS_H_

#include <map>
#include <string_view>
#include <vector>

#include "neuguard/attacks/score_record.h"

namespace neuguard::attacks {

// log(max(p, 1e-30)); every logarithm of a probability goes through this.
double SafeLog(double p);

// Member iff the target model classifies the sample correctly.
bool MetricCorrectness(const ScoreRecord& record);
// F(x)_y, the true-class score.
double MetricConfidence(const ScoreRecord& record);
// -sum_i F(x)_i log F(x)_i.
double MetricEntropy(const ScoreRecord& record);
// -(1 - F(x)_y) log F(x)_y - sum_{i != y} F(x)_i log(1 - F(x)_i).
double MetricModifiedEntropy(const ScoreRecord& record);

enum class MetricKind { kConfidence, kEntropy, kModifiedEntropy, kBoundaryDistance };
enum class Direction { kMemberIfGE, kMemberIfLE };

std::string_view MetricName(MetricKind metric);
// Natural direction: large confidence / distance and small (modified)
// entropy indicate membership.
Direction DefaultDirection(MetricKind metric);
// kBoundaryDistance reads ScoreRecord::boundary_distance (Error if unset).
double MetricValue(MetricKind metric, const ScoreRecord& record);

struct ThresholdSet {
  MetricKind metric = MetricKind::kConfidence;
  Direction direction = Direction::kMemberIfGE;
  std::map<int, double> per_class;
  // Fallback for classes absent from calibration, and the only threshold
  // used by the global (label-only) attack.
  double global = 0.0;
  // Balanced accuracy each threshold reached on calibration data.
  std::map<int, double> calibration_accuracy;
  double global_calibration_accuracy = 0.0;

  double ThresholdFor(int label) const;
};

bool PredictMember(double value, double threshold, Direction direction);

struct SweepResult {
  double threshold = 0.0;
  double balanced_accuracy = 0.0;
};

// Candidate thresholds are -inf, the midpoints between consecutive sorted
// unique values of both sides, and +inf. Returns the candidate with the
// best balanced accuracy, the smallest one on ties. When one side is empty
// its recall is left out of the average.
SweepResult SweepThreshold(const std::vector<double>& member_values,
                           const std::vector<double>& nonmember_values,
                           Direction direction);

// Per-class sweep on calibration records plus a global sweep over all of
// them. Throws Error on an empty record set.
ThresholdSet SelectClassThresholds(const std::vector<ScoreRecord>& known,
                                   MetricKind metric, Direction direction);
// Single global threshold, ignoring labels.
ThresholdSet SelectGlobalThreshold(const std::vector<ScoreRecord>& known,
                                   MetricKind metric, Direction direction);

// 0.5 * member recall + 0.5 * non-member recall. Throws Error when either
// side is empty.
double BalancedAccuracy(const std::vector<ScoreRecord>& records,
                        const std::vector<bool>& predicted_member);

double MetricAttackAccuracy(const std::vector<ScoreRecord>& eval,
                            const ThresholdSet& thresholds);
double CorrectnessAttackAccuracy(const std::vector<ScoreRecord>& eval);

}  // namespace neuguard::attacks

#endif  // NEUGUARD_ATTACKS_METRIC_ATTACKS_H_
