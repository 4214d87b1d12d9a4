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

#include "neuguard/data/generators.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace neuguard::data {

Dataset GenerateSynthetic(const SyntheticConfig& config, std::uint64_t seed) {
  if (config.num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (config.dim <= 0 || config.per_class_train <= 0 ||
      config.per_class_test <= 0) {
    throw ConfigError("synthetic dataset counts must be positive");
  }
  if (!(config.cluster_spread >= 0.0)) {
    throw ConfigError("cluster_spread must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const int k = config.num_classes;
  const int d = config.dim;
  Matrix centers(k, d);
  for (int c = 0; c < k; ++c) {
    for (int j = 0; j < d; ++j) centers(c, j) = normal(rng);
    centers.row(c).normalize();
  }

  const int per_class = config.per_class_train + config.per_class_test;
  const int n = k * per_class;
  Dataset ds;
  ds.num_classes = k;
  ds.provenance = Provenance::kSynthetic;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  std::vector<std::size_t> train, test;
  int row = 0;
  for (int c = 0; c < k; ++c) {
    for (int s = 0; s < per_class; ++s, ++row) {
      for (int j = 0; j < d; ++j) {
        ds.features(row, j) = centers(c, j) + config.cluster_spread * normal(rng);
      }
      ds.labels[row] = c;
      (s < config.per_class_train ? train : test)
          .push_back(static_cast<std::size_t>(row));
    }
  }
  std::shuffle(train.begin(), train.end(), rng);
  std::shuffle(test.begin(), test.end(), rng);
  ds.splits[std::string(split::kTrain)] = std::move(train);
  ds.splits[std::string(split::kTest)] = std::move(test);
  return ds;
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string Trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string Coordinates(std::size_t row, std::size_t col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

Dataset ParseTabularCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || Trim(line).empty()) {
    throw Error("empty CSV file");
  }
  std::vector<std::string> header = SplitCsvLine(line);
  for (auto& h : header) h = Trim(h);
  const auto label_it = std::find(header.begin(), header.end(), "label");
  if (label_it == header.end()) throw Error("CSV header has no 'label' column");
  const std::size_t label_col = label_it - header.begin();
  const std::size_t width = header.size();
  if (width < 2) throw Error("CSV needs at least one feature column");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    ++row_no;
    std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != width) {
      throw Error("ragged CSV row " + std::to_string(row_no) + ": expected " +
                  std::to_string(width) + " cells, found " +
                  std::to_string(cells.size()));
    }
    std::vector<double> features;
    features.reserve(width - 1);
    for (std::size_t c = 0; c < width; ++c) {
      const std::string cell = Trim(cells[c]);
      if (c == label_col) {
        int y = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), y);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || y < 0) {
          throw Error("invalid label '" + cell + "' at " +
                      Coordinates(row_no, c + 1));
        }
        labels.push_back(y);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
        throw Error("non-numeric cell '" + cell + "' at " +
                    Coordinates(row_no, c + 1));
      }
      features.push_back(v);
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw Error("CSV file has no data rows");

  Dataset ds;
  ds.provenance = Provenance::kTabular;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(width - 1));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c + 1 < width; ++c) ds.features(r, c) = rows[r][c];
  }
  ds.labels = std::move(labels);
  ds.num_classes = *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  std::vector<bool> seen(ds.num_classes, false);
  for (int y : ds.labels) seen[y] = true;
  for (int y = 0; y < ds.num_classes; ++y) {
    if (!seen[y]) {
      throw Error("unknown label values: class " + std::to_string(y) +
                  " never appears but larger labels do");
    }
  }
  return ds;
}

Dataset LoadTabularCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open CSV file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseTabularCsv(buf.str());
}

}  // namespace neuguard::data
