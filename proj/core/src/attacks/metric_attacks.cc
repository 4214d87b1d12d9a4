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


#include "neuguard/attacks/metric_attacks.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace neuguard::attacks {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckLabel(const ScoreRecord& r) {
  if (r.true_label < 0 || r.true_label >= r.num_classes()) {
    throw Error("record " + std::to_string(r.sample_id) + ": label " +
                std::to_string(r.true_label) + " out of range");
  }
}

std::vector<double> Candidates(const std::vector<double>& a,
                               const std::vector<double>& b) {
  std::vector<double> values(a);
  values.insert(values.end(), b.begin(), b.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out;
  out.reserve(values.size() + 1);
  out.push_back(-kInf);
  for (std::size_t i = 1; i < values.size(); ++i) {
    out.push_back(values[i - 1] + 0.5 * (values[i] - values[i - 1]));
  }
  out.push_back(kInf);
  return out;
}

// Number of values predicted member for ascending thresholds, advancing a
// pointer over the sorted values.
class MemberCounter {
 public:
  MemberCounter(std::vector<double> values, Direction direction)
      : values_(std::move(values)), direction_(direction) {
    std::sort(values_.begin(), values_.end());
  }
  std::size_t Count(double threshold) {
    // below_ = number of values that fail (GE) or pass (LE) the threshold.
    if (direction_ == Direction::kMemberIfGE) {
      while (below_ < values_.size() && values_[below_] < threshold) ++below_;
      return values_.size() - below_;
    }
    while (below_ < values_.size() && values_[below_] <= threshold) ++below_;
    return below_;
  }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  Direction direction_;
  std::size_t below_ = 0;
};

SweepResult SweepRecords(const std::vector<const ScoreRecord*>& records,
                         MetricKind metric, Direction direction) {
  std::vector<double> members, nonmembers;
  for (const ScoreRecord* r : records) {
    (r->is_member ? members : nonmembers).push_back(MetricValue(metric, *r));
  }
  return SweepThreshold(members, nonmembers, direction);
}

}  // namespace

double SafeLog(double p) { return std::log(std::max(p, kLogFloor)); }

bool MetricCorrectness(const ScoreRecord& record) { return record.correct(); }

double MetricConfidence(const ScoreRecord& record) {
  CheckLabel(record);
  return record.scores[record.true_label];
}

double MetricEntropy(const ScoreRecord& record) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < record.scores.size(); ++i) {
    const double p = record.scores[i];
    h -= p * SafeLog(p);
  }
  return h;
}

double MetricModifiedEntropy(const ScoreRecord& record) {
  CheckLabel(record);
  const int y = record.true_label;
  const double py = record.scores[y];
  double me = -(1.0 - py) * SafeLog(py);
  for (Eigen::Index i = 0; i < record.scores.size(); ++i) {
    if (i == y) continue;
    const double p = record.scores[i];
    me -= p * SafeLog(1.0 - p);
  }
  return me;
}

std::string_view MetricName(MetricKind metric) {
  switch (metric) {
    case MetricKind::kConfidence: return "confidence";
    case MetricKind::kEntropy: return "entropy";
    case MetricKind::kModifiedEntropy: return "modified_entropy";
    case MetricKind::kBoundaryDistance: return "boundary_distance";
  }
  return "unknown";
}

Direction DefaultDirection(MetricKind metric) {
  switch (metric) {
    case MetricKind::kEntropy:
    case MetricKind::kModifiedEntropy:
      return Direction::kMemberIfLE;
    default:
      return Direction::kMemberIfGE;
  }
}

double MetricValue(MetricKind metric, const ScoreRecord& record) {
  switch (metric) {
    case MetricKind::kConfidence: return MetricConfidence(record);
    case MetricKind::kEntropy: return MetricEntropy(record);
    case MetricKind::kModifiedEntropy: return MetricModifiedEntropy(record);
    case MetricKind::kBoundaryDistance:
      if (!record.boundary_distance) {
        throw Error("record " + std::to_string(record.sample_id) +
                    " has no boundary distance");
      }
      return *record.boundary_distance;
  }
  throw Error("unknown metric");
}

double ThresholdSet::ThresholdFor(int label) const {
  const auto it = per_class.find(label);
  return it == per_class.end() ? global : it->second;
}

bool PredictMember(double value, double threshold, Direction direction) {
  return direction == Direction::kMemberIfGE ? value >= threshold
                                             : value <= threshold;
}

SweepResult SweepThreshold(const std::vector<double>& member_values,
                           const std::vector<double>& nonmember_values,
                           Direction direction) {
  if (member_values.empty() && nonmember_values.empty()) {
    throw Error("threshold sweep needs at least one value");
  }
  MemberCounter members(member_values, direction);
  MemberCounter nonmembers(nonmember_values, direction);
  SweepResult best{0.0, -1.0};
  for (double t : Candidates(member_values, nonmember_values)) {
    const std::size_t tp = members.Count(t);
    const std::size_t fp = nonmembers.Count(t);
    double acc = 0.0;
    int sides = 0;
    if (members.size() > 0) {
      acc += static_cast<double>(tp) / static_cast<double>(members.size());
      ++sides;
    }
    if (nonmembers.size() > 0) {
      acc += 1.0 - static_cast<double>(fp) / static_cast<double>(nonmembers.size());
      ++sides;
    }
    acc /= sides;
    if (acc > best.balanced_accuracy) best = {t, acc};
  }
  return best;
}

ThresholdSet SelectClassThresholds(const std::vector<ScoreRecord>& known,
                                   MetricKind metric, Direction direction) {
  ThresholdSet set = SelectGlobalThreshold(known, metric, direction);
  std::map<int, std::vector<const ScoreRecord*>> by_class;
  for (const auto& r : known) by_class[r.true_label].push_back(&r);
  for (const auto& [label, records] : by_class) {
    const SweepResult s = SweepRecords(records, metric, direction);
    set.per_class[label] = s.threshold;
    set.calibration_accuracy[label] = s.balanced_accuracy;
  }
  return set;
}

ThresholdSet SelectGlobalThreshold(const std::vector<ScoreRecord>& known,
                                   MetricKind metric, Direction direction) {
  if (known.empty()) throw Error("no known records for threshold selection");
  std::vector<const ScoreRecord*> all;
  all.reserve(known.size());
  for (const auto& r : known) all.push_back(&r);
  const SweepResult s = SweepRecords(all, metric, direction);
  ThresholdSet set;
  set.metric = metric;
  set.direction = direction;
  set.global = s.threshold;
  set.global_calibration_accuracy = s.balanced_accuracy;
  return set;
}

double BalancedAccuracy(const std::vector<ScoreRecord>& records,
                        const std::vector<bool>& predicted_member) {
  if (records.size() != predicted_member.size()) {
    throw Error("prediction count does not match record count");
  }
  std::size_t members = 0, nonmembers = 0, tp = 0, tn = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].is_member) {
      ++members;
      tp += predicted_member[i] ? 1 : 0;
    } else {
      ++nonmembers;
      tn += predicted_member[i] ? 0 : 1;
    }
  }
  if (members == 0 || nonmembers == 0) {
    throw Error("balanced accuracy needs both members and non-members");
  }
  return 0.5 * static_cast<double>(tp) / static_cast<double>(members) +
         0.5 * static_cast<double>(tn) / static_cast<double>(nonmembers);
}

double MetricAttackAccuracy(const std::vector<ScoreRecord>& eval,
                            const ThresholdSet& thresholds) {
  std::vector<bool> predicted(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const double v = MetricValue(thresholds.metric, eval[i]);
    predicted[i] = PredictMember(v, thresholds.ThresholdFor(eval[i].true_label),
                                 thresholds.direction);
  }
  return BalancedAccuracy(eval, predicted);
}

double CorrectnessAttackAccuracy(const std::vector<ScoreRecord>& eval) {
  std::vector<bool> predicted(eval.size());
  for (std::size_t i = 0; i < eval.size(); ++i) {
    predicted[i] = MetricCorrectness(eval[i]);
  }
  return BalancedAccuracy(eval, predicted);
}

}  // namespace neuguard::attacks
