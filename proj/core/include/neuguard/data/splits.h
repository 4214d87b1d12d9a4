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

#ifndef NEUGUARD_DATA_SPLITS_H_
#define NEUGUARD_DATA_SPLITS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "neuguard/data/dataset.h"

namespace neuguard::data {

struct SplitConfig {
  // Used only when the dataset has no "train"/"test" splits yet; the test
  // side defaults to every remaining row.
  std::optional<std::size_t> train_size;
  std::optional<std::size_t> test_size;
  std::size_t known_members = 0;
  std::size_t known_nonmembers = 0;
  std::size_t eval_members = 0;
  std::size_t eval_nonmembers = 0;
};

// Adds known/eval member and non-member splits. Known members and eval
// members are disjoint subsets of "train"; likewise on the "test" side.
// The two eval sides are truncated to the smaller requested size. Throws
// Error listing the shortfall when a side lacks samples.
Dataset MakeMiaSplits(Dataset dataset, const SplitConfig& config,
                      std::uint64_t seed);

// JSON with every split's index list plus the dataset hash.
std::string SplitsToJson(const Dataset& dataset);

}  // namespace neuguard::data

#endif  // NEUGUARD_DATA_SPLITS_H_
