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


#ifndef NEUGUARD_HARNESS_COMMANDS_H_
#define NEUGUARD_HARNESS_COMMANDS_H_

#include <filesystem>
#include <iosfwd>

namespace neuguard::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

// Each command writes into the config's report.output_dir (or the given
// directory) and returns an exit code; messages go to `log`.

// checkpoint.ngck, train_log.csv, splits.json, timing.json.
int CmdTrain(const std::filesystem::path& config_path, std::ostream& log);

// scores_members.jsonl, scores_nonmembers.jsonl, attack_report.json.
int CmdAttack(const std::filesystem::path& config_path,
              const std::filesystem::path& checkpoint_path, std::ostream& log);

// Distance report between the modified-entropy histograms of two dumps,
// printed as JSON to `out`.
int CmdDistance(const std::filesystem::path& dump_a,
                const std::filesystem::path& dump_b, int bins,
                std::ostream& out, std::ostream& log);

// report.csv and report.json comparing every run found under `run_dir`.
int CmdReport(const std::filesystem::path& run_dir, std::ostream& log);

}  // namespace neuguard::harness

#endif  // NEUGUARD_HARNESS_COMMANDS_H_
