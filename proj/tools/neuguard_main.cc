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


// neuguard: train / attack / distance / report.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "neuguard/harness/commands.h"

int main(int argc, char** argv) {
  CLI::App app{"NeuGuard membership-inference laboratory"};
  app.require_subcommand(1);

  std::string train_config;
  auto* train = app.add_subcommand("train", "Train the target model of a config");
  train->add_option("config", train_config, "Experiment config (JSON)")->required();

  std::string attack_config, checkpoint;
  auto* attack = app.add_subcommand("attack", "Run the enabled attacks on a checkpoint");
  attack->add_option("config", attack_config, "Experiment config (JSON)")->required();
  attack->add_option("checkpoint", checkpoint, "Checkpoint written by train")->required();

  std::string dump_a, dump_b;
  int bins = 100;
  auto* distance = app.add_subcommand(
      "distance", "Histogram distances between two score dumps (modified entropy)");
  distance->add_option("dumpA", dump_a, "First JSONL score dump")->required();
  distance->add_option("dumpB", dump_b, "Second JSONL score dump")->required();
  distance->add_option("--bins", bins, "Number of histogram bins");

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Consolidate the runs under a directory");
  report->add_option("dir", run_dir, "Directory holding run outputs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : neuguard::harness::kExitConfigError;
  }

  namespace h = neuguard::harness;
  if (*train) return h::CmdTrain(train_config, std::cerr);
  if (*attack) return h::CmdAttack(attack_config, checkpoint, std::cerr);
  if (*distance) return h::CmdDistance(dump_a, dump_b, bins, std::cout, std::cerr);
  return h::CmdReport(run_dir, std::cerr);
}
