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

#ifndef NEUGUARD_NN_CHECKPOINT_H_
#define NEUGUARD_NN_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>

#include "neuguard/nn/model.h"

namespace neuguard::nn {

// Checkpoint layout:
//
//   "NGCKPT01"                      8-byte magic
//   <JSON header>\n                 single line, UTF-8
//   float64 LE arrays               per layer: weights (row-major,
//                                   out x in) then bias (out)
//
// The header carries "format", "seed", "layers" (list of {"in", "out",
// "activation"}), "parameter_blocks" (2 per layer) and a free-form
// "metadata" object. Trailing bytes after the last block are an error.

inline constexpr char kCheckpointMagic[] = "NGCKPT01";

std::string SerializeCheckpoint(
    const NetworkModel& model,
    const std::map<std::string, std::string>& metadata = {});

// Throws ParseError (with byte offset) on malformed input and Error on a
// structural mismatch between header and payload. Never returns a partial
// model.
NetworkModel ParseCheckpoint(const std::string& bytes);

void SaveCheckpoint(const NetworkModel& model,
                    const std::filesystem::path& path,
                    const std::map<std::string, std::string>& metadata = {});
NetworkModel LoadCheckpoint(const std::filesystem::path& path);

}  // namespace neuguard::nn

#endif  // NEUGUARD_NN_CHECKPOINT_H_
