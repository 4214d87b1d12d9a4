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

#ifndef NEUGUARD_DATA_GENERATORS_H_
#define NEUGUARD_DATA_GENERATORS_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "neuguard/data/dataset.h"

namespace neuguard::data {

struct SyntheticConfig {
  int num_classes = 10;
  int dim = 64;
  int per_class_train = 50;
  int per_class_test = 200;
  double cluster_spread = 0.9;
};

// Gaussian clusters around seeded random centers on the unit sphere. The
// result carries "train" and "test" splits, class-interleaved and shuffled.
Dataset GenerateSynthetic(const SyntheticConfig& config, std::uint64_t seed);

// CSV with a header row; the column named "label" holds integer class ids,
// every other column is a numeric feature. Labels must be dense in
// [0, k); k = max label + 1. Errors cite 1-based (row, column), counting
// data rows only (the header is not row 1).
Dataset LoadTabularCsv(const std::filesystem::path& path);
Dataset ParseTabularCsv(const std::string& text);

}  // namespace neuguard::data

#endif  // NEUGUARD_DATA_GENERATORS_H_
