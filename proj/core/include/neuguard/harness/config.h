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


#ifndef NEUGUARD_HARNESS_CONFIG_H_
#define NEUGUARD_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "neuguard/attacks/boundary.h"
#include "neuguard/attacks/nn_attacks.h"
#include "neuguard/data/generators.h"
#include "neuguard/data/splits.h"
#include "neuguard/nn/model.h"
#include "neuguard/nn/optimizer.h"
#include "neuguard/reg/regularizers.h"

namespace neuguard::harness {

// Four independent seeds so that one factor can vary at a time.
struct Seeds {
  std::uint64_t data = 0;
  std::uint64_t model = 0;  // also drives the batch order
  std::uint64_t split = 0;
  std::uint64_t attack = 0;
};

enum class DatasetKind { kSynthetic, kCsv };

struct DatasetSection {
  DatasetKind kind = DatasetKind::kSynthetic;
  data::SyntheticConfig synthetic;
  std::filesystem::path csv_path;  // absolute after loading
  // Standardize all features with statistics of the train split.
  bool standardize = true;
};

struct LayerSection {
  int width = 0;
  nn::Activation activation = nn::Activation::kTanh;
};

struct TrainSection {
  int epochs = 100;
  int batch_size = 64;
  nn::OptimizerConfig optimizer;
};

enum class DefenseKind { kNone, kEarlyStop, kNeuGuard };

struct DefenseSection {
  DefenseKind kind = DefenseKind::kNone;
  int early_stop_epochs = 0;     // kEarlyStop: overrides train.epochs
  reg::RegularizerConfig neuguard;  // kNeuGuard
};

inline constexpr std::string_view kAttackNames[] = {
    "correctness", "confidence", "entropy", "modified_entropy",
    "sorted_nn", "unsorted_nsh", "label_only"};

struct AttacksSection {
  std::set<std::string, std::less<>> enabled;
  attacks::AttackTrainConfig sorted_nn = attacks::DefaultSortedNnConfig();
  attacks::AttackTrainConfig unsorted_nsh = attacks::DefaultNshConfig();
  attacks::BoundaryConfig label_only;

  bool is_enabled(std::string_view name) const { return enabled.count(name) > 0; }
};

struct ReportSection {
  std::filesystem::path output_dir;  // absolute after loading
  int histogram_bins = 100;
};

struct ExperimentConfig {
  std::string name;
  Seeds seeds;
  DatasetSection dataset;
  data::SplitConfig splits;
  std::vector<LayerSection> layers;
  TrainSection train;
  DefenseSection defense;
  AttacksSection attacks;
  ReportSection report;

  // Effective number of training epochs after the defense override.
  int effective_epochs() const;
};

std::string_view DefenseName(DefenseKind kind);

// Parses and validates a config. Relative paths resolve against
// `base_dir`. Every problem (unknown key, missing or ill-typed field,
// missing file) raises ConfigError naming the field.
ExperimentConfig ParseExperimentConfig(std::string_view json_text,
                                       const std::filesystem::path& base_dir);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

}  // namespace neuguard::harness

#endif  // NEUGUARD_HARNESS_CONFIG_H_
