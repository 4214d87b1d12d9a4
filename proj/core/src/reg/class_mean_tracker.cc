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

#include "neuguard/reg/class_mean_tracker.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace neuguard::reg {

ClassMeanTracker::ClassMeanTracker(int num_classes) : num_classes_(num_classes) {
  if (num_classes < 1) throw ConfigError("tracker needs at least one class");
  Reset();
}

void ClassMeanTracker::Reset() {
  means_.assign(num_classes_, Vector::Zero(num_classes_));
  counts_.assign(num_classes_, 0);
  sorted_mean_ = Vector::Zero(num_classes_);
  sorted_count_ = 0;
}

void ClassMeanTracker::CheckScores(const Matrix& scores) const {
  if (scores.cols() != num_classes_) {
    throw Error("score width " + std::to_string(scores.cols()) +
                " does not match tracker class count " +
                std::to_string(num_classes_));
  }
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    if (std::abs(scores.row(i).sum() - 1.0) > 1e-6) {
      throw Error("score row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

void ClassMeanTracker::Update(const Matrix& scores,
                              std::span<const int> labels) {
  CheckScores(scores);
  if (labels.size() != static_cast<std::size_t>(scores.rows())) {
    throw Error("label count does not match score rows");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes_) {
      throw Error("label " + std::to_string(y) + " outside [0, " +
                  std::to_string(num_classes_) + ")");
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    counts_[y] += 1;
    const double c = static_cast<double>(counts_[y]);
    means_[y] = means_[y] * ((c - 1.0) / c) +
                scores.row(static_cast<Eigen::Index>(i)).transpose() / c;
  }
}

void ClassMeanTracker::UpdateSorted(const Matrix& scores) {
  CheckScores(scores);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Vector row = scores.row(i).transpose();
    std::sort(row.data(), row.data() + row.size(), std::greater<double>());
    sorted_count_ += 1;
    const double c = static_cast<double>(sorted_count_);
    sorted_mean_ = sorted_mean_ * ((c - 1.0) / c) + row / c;
  }
}

}  // namespace neuguard::reg
