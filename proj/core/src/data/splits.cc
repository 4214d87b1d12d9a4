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

#include "neuguard/data/splits.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace neuguard::data {

Dataset MakeMiaSplits(Dataset dataset, const SplitConfig& config,
                      std::uint64_t seed) {
  std::mt19937_64 rng(MixSeed(seed, 0x5311));

  if (!dataset.has_split(split::kTrain) || !dataset.has_split(split::kTest)) {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t train_size = config.train_size.value_or(all.size() / 2);
    const std::size_t test_size =
        config.test_size.value_or(all.size() > train_size ? all.size() - train_size : 0);
    if (train_size + test_size > all.size()) {
      throw Error("train/test sizes exceed dataset: requested " +
                  std::to_string(train_size + test_size) + ", available " +
                  std::to_string(all.size()) + " (shortfall " +
                  std::to_string(train_size + test_size - all.size()) + ")");
    }
    dataset.splits[std::string(split::kTrain)].assign(
        all.begin(), all.begin() + train_size);
    dataset.splits[std::string(split::kTest)].assign(
        all.begin() + train_size, all.begin() + train_size + test_size);
  }

  const std::size_t eval_size =
      std::min(config.eval_members, config.eval_nonmembers);
  const auto& train = dataset.split_indices(split::kTrain);
  const auto& test = dataset.split_indices(split::kTest);
  std::string shortfall;
  if (config.known_members + eval_size > train.size()) {
    shortfall += " members: need " +
                 std::to_string(config.known_members + eval_size) +
                 ", have " + std::to_string(train.size()) + ";";
  }
  if (config.known_nonmembers + eval_size > test.size()) {
    shortfall += " non-members: need " +
                 std::to_string(config.known_nonmembers + eval_size) +
                 ", have " + std::to_string(test.size()) + ";";
  }
  if (!shortfall.empty()) {
    shortfall.pop_back();
    throw Error("requested split sizes exceed available samples:" + shortfall);
  }

  auto carve = [&rng](std::vector<std::size_t> pool, std::size_t known,
                      std::size_t eval) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::size_t> a(pool.begin(), pool.begin() + known);
    std::vector<std::size_t> b(pool.begin() + known,
                               pool.begin() + known + eval);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::pair{std::move(a), std::move(b)};
  };
  auto [known_m, eval_m] = carve(train, config.known_members, eval_size);
  auto [known_n, eval_n] = carve(test, config.known_nonmembers, eval_size);
  dataset.splits[std::string(split::kKnownMembers)] = std::move(known_m);
  dataset.splits[std::string(split::kEvalMembers)] = std::move(eval_m);
  dataset.splits[std::string(split::kKnownNonMembers)] = std::move(known_n);
  dataset.splits[std::string(split::kEvalNonMembers)] = std::move(eval_n);
  ValidateDataset(dataset);
  return dataset;
}

std::string SplitsToJson(const Dataset& dataset) {
  nlohmann::json j;
  std::ostringstream hash;
  hash << std::hex << DatasetHash(dataset);
  j["dataset_hash"] = hash.str();
  j["num_samples"] = dataset.size();
  j["num_classes"] = dataset.num_classes;
  for (const auto& [name, idx] : dataset.splits) j["splits"][name] = idx;
  return j.dump(2);
}

}  // namespace neuguard::data
