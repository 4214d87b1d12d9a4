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

#ifndef NEUGUARD_REG_CLASS_MEAN_TRACKER_H_
#define NEUGUARD_REG_CLASS_MEAN_TRACKER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "neuguard/common.h"

namespace neuguard::reg {

// Running per-class mean of softmax score vectors:
//
//   count_y += 1
//   mu_y = mu_y * (count_y - 1) / count_y + score / count_y
//
// A second, label-free running mean of descending-sorted score vectors backs
// the single-sort variance mode.
class ClassMeanTracker {
 public:
  explicit ClassMeanTracker(int num_classes);

  // Rows of `scores` must have length k and sum to 1 within 1e-6. Throws
  // Error on a label outside [0, k) before mutating anything.
  void Update(const Matrix& scores, std::span<const int> labels);
  void UpdateSorted(const Matrix& scores);
  void Reset();

  int num_classes() const { return num_classes_; }
  const Vector& mean(int label) const { return means_.at(label); }
  std::int64_t count(int label) const { return counts_.at(label); }
  const Vector& sorted_mean() const { return sorted_mean_; }
  std::int64_t sorted_count() const { return sorted_count_; }

 private:
  void CheckScores(const Matrix& scores) const;

  int num_classes_;
  std::vector<Vector> means_;
  std::vector<std::int64_t> counts_;
  Vector sorted_mean_;
  std::int64_t sorted_count_ = 0;
};

}  // namespace neuguard::reg

#endif  // NEUGUARD_REG_CLASS_MEAN_TRACKER_H_
