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

#include "neuguard/data/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <string>

namespace neuguard::data {

bool Dataset::has_split(std::string_view name) const {
  return splits.find(name) != splits.end();
}

const std::vector<std::size_t>& Dataset::split_indices(
    std::string_view name) const {
  auto it = splits.find(name);
  if (it == splits.end()) {
    throw Error("dataset has no split named '" + std::string(name) + "'");
  }
  return it->second;
}

Matrix Dataset::SplitFeatures(std::string_view name) const {
  return GatherRows(features, split_indices(name));
}

std::vector<int> Dataset::SplitLabels(std::string_view name) const {
  const auto& idx = split_indices(name);
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

Matrix GatherRows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) =
        m.row(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

void StandardizeOnSplit(Dataset& dataset, std::string_view split_name) {
  const auto& idx = dataset.split_indices(split_name);
  if (idx.empty()) throw Error("cannot standardize on an empty split");
  const double n = static_cast<double>(idx.size());
  for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t i : idx) mean += dataset.features(i, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t i : idx) {
      const double d = dataset.features(i, c) - mean;
      var += d * d;
    }
    var /= n;
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    dataset.features.col(c) =
        ((dataset.features.col(c).array() - mean) * scale).matrix();
  }
}

namespace {

void CheckDisjoint(const Dataset& d, std::string_view a, std::string_view b) {
  if (!d.has_split(a) || !d.has_split(b)) return;
  std::set<std::size_t> left(d.split_indices(a).begin(),
                             d.split_indices(a).end());
  for (std::size_t i : d.split_indices(b)) {
    if (left.count(i)) {
      throw Error("splits '" + std::string(a) + "' and '" + std::string(b) +
                  "' share index " + std::to_string(i));
    }
  }
}

void CheckSubset(const Dataset& d, std::string_view sub,
                 std::string_view super) {
  if (!d.has_split(sub) || !d.has_split(super)) return;
  std::set<std::size_t> all(d.split_indices(super).begin(),
                            d.split_indices(super).end());
  for (std::size_t i : d.split_indices(sub)) {
    if (!all.count(i)) {
      throw Error("split '" + std::string(sub) + "' is not contained in '" +
                  std::string(super) + "' (index " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

void ValidateDataset(const Dataset& d) {
  if (static_cast<std::size_t>(d.features.rows()) != d.labels.size()) {
    throw Error("feature rows and label count differ");
  }
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    if (d.labels[i] < 0 || d.labels[i] >= d.num_classes) {
      throw Error("label out of range at row " + std::to_string(i));
    }
  }
  for (const auto& [name, idx] : d.splits) {
    for (std::size_t i : idx) {
      if (i >= d.size()) {
        throw Error("split '" + name + "' index " + std::to_string(i) +
                    " out of range");
      }
    }
  }
  CheckDisjoint(d, split::kTrain, split::kTest);
  CheckSubset(d, split::kKnownMembers, split::kTrain);
  CheckSubset(d, split::kEvalMembers, split::kTrain);
  CheckSubset(d, split::kKnownNonMembers, split::kTest);
  CheckSubset(d, split::kEvalNonMembers, split::kTest);
  CheckDisjoint(d, split::kKnownMembers, split::kEvalMembers);
  CheckDisjoint(d, split::kKnownNonMembers, split::kEvalNonMembers);
}

std::uint64_t DatasetHash(const Dataset& d) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t rows = d.features.rows();
  const std::int64_t cols = d.features.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  mix(d.features.data(), sizeof(double) * d.features.size());
  for (int y : d.labels) {
    const std::int32_t v = y;
    mix(&v, sizeof v);
  }
  return h;
}

}  // namespace neuguard::data
