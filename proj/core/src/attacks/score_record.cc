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


#include "neuguard/attacks/score_record.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace neuguard::attacks {
namespace {

using nlohmann::json;

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<ScoreRecord> FilterMembership(const std::vector<ScoreRecord>& records,
                                          bool member) {
  std::vector<ScoreRecord> out;
  for (const auto& r : records) {
    if (r.is_member == member) out.push_back(r);
  }
  return out;
}

}  // namespace

ScoreRecord MakeRecord(std::int64_t sample_id, Vector scores, int true_label,
                       bool is_member) {
  if (scores.size() == 0) throw Error("score vector is empty");
  ScoreRecord r;
  r.sample_id = sample_id;
  r.predicted_label = nn::ArgMax(scores.transpose());
  r.scores = std::move(scores);
  r.true_label = true_label;
  r.is_member = is_member;
  return r;
}

std::vector<ScoreRecord> CollectScores(const nn::NetworkModel& model,
                                       const data::Dataset& dataset,
                                       std::string_view split_name,
                                       bool is_member,
                                       const nn::HiddenScaler* scaler,
                                       int batch_size, CollectTiming* timing) {
  const auto& rows = dataset.split_indices(split_name);
  if (rows.empty()) {
    throw Error("split '" + std::string(split_name) + "' is empty");
  }
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  std::vector<ScoreRecord> records;
  records.reserve(rows.size());
  std::vector<double> seconds;
  const std::size_t batch = static_cast<std::size_t>(batch_size);
  for (std::size_t start = 0; start < rows.size(); start += batch) {
    const std::size_t end = std::min(rows.size(), start + batch);
    std::vector<std::size_t> chunk(rows.begin() + start, rows.begin() + end);
    const Matrix x = data::GatherRows(dataset.features, chunk);
    const auto t0 = std::chrono::steady_clock::now();
    const Matrix scores = nn::Predict(model, x, scaler);
    seconds.push_back(std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count());
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      records.push_back(MakeRecord(static_cast<std::int64_t>(chunk[i]),
                                   scores.row(static_cast<Eigen::Index>(i)).transpose(),
                                   dataset.labels[chunk[i]], is_member));
    }
  }
  if (timing != nullptr) {
    timing->median_batch_seconds = Median(seconds);
    timing->num_batches = static_cast<int>(seconds.size());
  }
  return records;
}

Matrix ScoreMatrix(const std::vector<ScoreRecord>& records) {
  if (records.empty()) return Matrix();
  const Eigen::Index k = records.front().scores.size();
  Matrix m(static_cast<Eigen::Index>(records.size()), k);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].scores.size() != k) {
      throw Error("score width mismatch at record " + std::to_string(i));
    }
    m.row(static_cast<Eigen::Index>(i)) = records[i].scores.transpose();
  }
  return m;
}

std::vector<ScoreRecord> Members(const std::vector<ScoreRecord>& records) {
  return FilterMembership(records, true);
}

std::vector<ScoreRecord> NonMembers(const std::vector<ScoreRecord>& records) {
  return FilterMembership(records, false);
}

std::string RecordToJson(const ScoreRecord& record) {
  json j;
  j["sample_id"] = record.sample_id;
  j["is_member"] = record.is_member;
  j["true_label"] = record.true_label;
  j["predicted_label"] = record.predicted_label;
  j["scores"] = std::vector<double>(record.scores.data(),
                                    record.scores.data() + record.scores.size());
  if (record.boundary_distance) {
    j["boundary_distance"] = *record.boundary_distance;
  }
  return j.dump();
}

ScoreRecord RecordFromJson(std::string_view line) {
  const json j = json::parse(line);
  if (!j.is_object()) throw Error("score record must be a JSON object");
  const auto scores = j.at("scores").get<std::vector<double>>();
  ScoreRecord r;
  r.sample_id = j.at("sample_id").get<std::int64_t>();
  r.is_member = j.at("is_member").get<bool>();
  r.true_label = j.at("true_label").get<int>();
  r.predicted_label = j.at("predicted_label").get<int>();
  r.scores = Eigen::Map<const Vector>(scores.data(),
                                      static_cast<Eigen::Index>(scores.size()));
  if (j.contains("boundary_distance")) {
    r.boundary_distance = j.at("boundary_distance").get<double>();
  }
  return r;
}

void WriteJsonl(const std::filesystem::path& path,
                const std::vector<ScoreRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& r : records) out << RecordToJson(r) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<ScoreRecord> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(RecordFromJson(line));
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ": bad score record: " + e.what(),
                       line_offset);
    } catch (const Error& e) {
      throw ParseError(path.string() + ": " + e.what(), line_offset);
    }
  }
  return records;
}

}  // namespace neuguard::attacks
