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

#ifndef NEUGUARD_ATTACKS_SCORE_RECORD_H_
#define NEUGUARD_ATTACKS_SCORE_RECORD_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neuguard/common.h"
#include "neuguard/data/dataset.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/model.h"

namespace neuguard::attacks {

// The target model's response to one sample.
struct ScoreRecord {
  std::int64_t sample_id = 0;
  Vector scores;
  int true_label = 0;
  int predicted_label = 0;  // ArgMax(scores), lowest index on ties
  bool is_member = false;
  std::optional<double> boundary_distance;

  bool correct() const { return predicted_label == true_label; }
  int num_classes() const { return static_cast<int>(scores.size()); }
};

ScoreRecord MakeRecord(std::int64_t sample_id, Vector scores, int true_label,
                       bool is_member);

struct CollectTiming {
  double median_batch_seconds = 0.0;
  int num_batches = 0;
};

// One record per sample of `split_name`, in split order. `scaler` carries
// any inference-time amplification. Throws Error on an empty split.
std::vector<ScoreRecord> CollectScores(const nn::NetworkModel& model,
                                       const data::Dataset& dataset,
                                       std::string_view split_name,
                                       bool is_member,
                                       const nn::HiddenScaler* scaler = nullptr,
                                       int batch_size = 256,
                                       CollectTiming* timing = nullptr);

// Records as (k columns) score matrix.
Matrix ScoreMatrix(const std::vector<ScoreRecord>& records);

// Member/non-member partition helpers.
std::vector<ScoreRecord> Members(const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> NonMembers(const std::vector<ScoreRecord>& records);

// JSONL: one object per line with sample_id, is_member, true_label,
// predicted_label, scores and the optional boundary_distance.
std::string RecordToJson(const ScoreRecord& record);
ScoreRecord RecordFromJson(std::string_view line);
void WriteJsonl(const std::filesystem::path& path,
                const std::vector<ScoreRecord>& records);
// Throws ParseError with the byte offset of the offending line.
std::vector<ScoreRecord> ReadJsonl(const std::filesystem::path& path);

}  // namespace neuguard::attacks

#endif  // NEUGUARD_ATTACKS_SCORE_RECORD_H_
