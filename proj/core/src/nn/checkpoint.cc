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

#include "neuguard/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace neuguard::nn {
namespace {

constexpr std::size_t kMagicSize = 8;

void AppendDouble(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
}

double ReadDouble(const std::string& in, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) {
    bits |= static_cast<std::uint64_t>(
                static_cast<unsigned char>(in[offset + b]))
            << (8 * b);
  }
  return std::bit_cast<double>(bits);
}

std::size_t BlockBytes(const LayerSpec& layer, bool weights) {
  const std::size_t count =
      weights ? static_cast<std::size_t>(layer.out_width) * layer.in_width
              : static_cast<std::size_t>(layer.out_width);
  return count * sizeof(double);
}

}  // namespace

std::string SerializeCheckpoint(
    const NetworkModel& model,
    const std::map<std::string, std::string>& metadata) {
  nlohmann::json header;
  header["format"] = "neuguard-checkpoint";
  header["version"] = 1;
  header["seed"] = model.seed;
  header["parameter_blocks"] = 2 * model.layers.size();
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerSpec& l : model.layers) {
    layers.push_back({{"in", l.in_width},
                      {"out", l.out_width},
                      {"activation", std::string(ActivationName(l.activation))}});
  }
  header["layers"] = std::move(layers);
  header["metadata"] = metadata;

  std::string out(kCheckpointMagic, kMagicSize);
  out += header.dump();
  out.push_back('\n');
  for (int k = 0; k < model.num_layers(); ++k) {
    const Matrix& w = model.weights[k];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) AppendDouble(out, w(i, j));
    }
    for (Eigen::Index i = 0; i < model.biases[k].size(); ++i) {
      AppendDouble(out, model.biases[k](i));
    }
  }
  return out;
}

NetworkModel ParseCheckpoint(const std::string& bytes) {
  if (bytes.size() < kMagicSize) {
    throw ParseError("checkpoint truncated before magic", bytes.size());
  }
  if (std::memcmp(bytes.data(), kCheckpointMagic, kMagicSize) != 0) {
    throw ParseError("bad checkpoint magic", 0);
  }
  const std::size_t newline = bytes.find('\n', kMagicSize);
  if (newline == std::string::npos) {
    throw ParseError("checkpoint header is not terminated", bytes.size());
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + kMagicSize,
                                   bytes.begin() + newline);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid checkpoint header: ") + e.what(),
                     kMagicSize + (e.byte > 0 ? e.byte - 1 : 0));
  }

  std::vector<LayerSpec> layers;
  std::uint64_t seed = 0;
  std::size_t declared_blocks = 0;
  try {
    if (header.at("format").get<std::string>() != "neuguard-checkpoint") {
      throw ParseError("unexpected checkpoint format", kMagicSize);
    }
    seed = header.at("seed").get<std::uint64_t>();
    for (const auto& l : header.at("layers")) {
      layers.push_back({l.at("in").get<int>(), l.at("out").get<int>(),
                        ParseActivation(l.at("activation").get<std::string>())});
    }
    declared_blocks = header.at("parameter_blocks").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid checkpoint header field: ") + e.what(),
                     kMagicSize);
  }
  try {
    ValidateLayerChain(layers);
  } catch (const ConfigError& e) {
    throw Error(std::string("checkpoint header: ") + e.what());
  }
  if (declared_blocks != 2 * layers.size()) {
    throw Error("checkpoint header declares " + std::to_string(layers.size()) +
                " layers but " + std::to_string(declared_blocks) +
                " parameter blocks");
  }

  // Count complete blocks before allocating anything.
  std::size_t offset = newline + 1;
  std::size_t expected = 0;
  std::size_t complete_blocks = 0;
  for (const LayerSpec& l : layers) {
    for (bool w : {true, false}) {
      expected += BlockBytes(l, w);
      if (offset + expected <= bytes.size()) ++complete_blocks;
    }
  }
  if (offset + expected > bytes.size()) {
    throw ParseError("structural error: header declares " +
                         std::to_string(layers.size()) + " layers (" +
                         std::to_string(2 * layers.size()) +
                         " parameter blocks) but the payload holds " +
                         std::to_string(complete_blocks) + " complete blocks",
                     bytes.size());
  }
  if (offset + expected < bytes.size()) {
    throw ParseError("trailing bytes after the last parameter block",
                     offset + expected);
  }

  NetworkModel model;
  model.layers = layers;
  model.seed = seed;
  for (const LayerSpec& l : layers) {
    Matrix w(l.out_width, l.in_width);
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        w(i, j) = ReadDouble(bytes, offset);
        offset += sizeof(double);
      }
    }
    Vector b(l.out_width);
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      b(i) = ReadDouble(bytes, offset);
      offset += sizeof(double);
    }
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
  }
  CheckFinite(model);
  return model;
}

void SaveCheckpoint(const NetworkModel& model,
                    const std::filesystem::path& path,
                    const std::map<std::string, std::string>& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  const std::string bytes = SerializeCheckpoint(model, metadata);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing checkpoint " + path.string());
}

NetworkModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCheckpoint(buf.str());
}

}  // namespace neuguard::nn
