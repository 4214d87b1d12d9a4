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

#ifndef NEUGUARD_DATA_DATASET_H_
#define NEUGUARD_DATA_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "neuguard/common.h"

namespace neuguard::data {

// Split names used throughout the library.
namespace split {
inline constexpr std::string_view kTrain = "train";
inline constexpr std::string_view kTest = "test";
inline constexpr std::string_view kKnownMembers = "known_members";
inline constexpr std::string_view kKnownNonMembers = "known_nonmembers";
inline constexpr std::string_view kEvalMembers = "eval_members";
inline constexpr std::string_view kEvalNonMembers = "eval_nonmembers";
}  // namespace split

enum class Provenance { kSynthetic, kTabular };

struct Dataset {
  Matrix features;          // N x D
  std::vector<int> labels;  // N, each in [0, num_classes)
  int num_classes = 0;
  std::map<std::string, std::vector<std::size_t>, std::less<>> splits;
  Provenance provenance = Provenance::kSynthetic;

  std::size_t size() const { return labels.size(); }
  int dim() const { return static_cast<int>(features.cols()); }
  bool has_split(std::string_view name) const;
  // Throws Error if the split is missing.
  const std::vector<std::size_t>& split_indices(std::string_view name) const;
  Matrix SplitFeatures(std::string_view name) const;
  std::vector<int> SplitLabels(std::string_view name) const;
};

Matrix GatherRows(const Matrix& m, const std::vector<std::size_t>& rows);

// Standardizes every column to mean 0 / variance 1 using statistics of the
// given split only. Constant columns are centered and left unscaled.
void StandardizeOnSplit(Dataset& dataset, std::string_view split_name);

// Checks label range, index ranges and the disjointness rules of the MIA
// split schema. Throws Error describing the first violation.
void ValidateDataset(const Dataset& dataset);

// FNV-1a over the feature bytes and labels.
std::uint64_t DatasetHash(const Dataset& dataset);

}  // namespace neuguard::data

#endif  // NEUGUARD_DATA_DATASET_H_
