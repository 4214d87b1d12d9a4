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


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "neuguard/harness/commands.h"
#include "neuguard/harness/config.h"
#include "neuguard/harness/experiment.h"
#include "neuguard/nn/checkpoint.h"

namespace neuguard::harness {
namespace {

namespace fs = std::filesystem;
using attacks::ReadJsonl;
using nlohmann::json;

// Small enough to train and attack in well under a second.
json TinyConfig(const std::string& name) {
  return {
      {"name", name},
      {"seeds", {{"data", 1}, {"model", 2}, {"split", 3}, {"attack", 4}}},
      {"dataset",
       {{"kind", "synthetic"}, {"num_classes", 3}, {"dim", 6},
        {"per_class_train", 12}, {"per_class_test", 20}, {"cluster_spread", 0.6}}},
      {"splits",
       {{"known_members", 16}, {"known_nonmembers", 30},
        {"eval_members", 20}, {"eval_nonmembers", 20}}},
      {"model", {{"layers", json::array({{{"width", 16}, {"activation", "tanh"}},
                                         {{"width", 3}, {"activation", "softmax"}}})}}},
      {"train", {{"epochs", 3}, {"batch_size", 8}, {"optimizer", "adam"},
                 {"learning_rate", 0.01}}},
      {"defense", {{"kind", "none"}}},
      {"attacks",
       {{"sorted_nn", {{"epochs", 2}, {"hidden", {8}}}},
        {"unsorted_nsh", {{"epochs", 2}, {"encoder_widths", {8, 4}},
                          {"combiner_hidden", {4}}}},
        {"label_only", {{"max_steps", 40}}}}},
      {"report", {{"output_dir", "out/" + name}, {"histogram_bins", 10}}},
  };
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("ng_harness_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& file, const json& j) const {
    const fs::path p = dir_ / file;
    std::ofstream(p) << j.dump(2);
    return p;
  }
  fs::path Out(const std::string& name) const { return dir_ / "out" / name; }

  fs::path dir_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json ReadJson(const fs::path& p) { return json::parse(Slurp(p)); }

std::string ConfigErrorText(const json& j, const fs::path& base) {
  try {
    ParseExperimentConfig(j.dump(), base);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST_F(HarnessTest, ParsesFullConfig) {
  json j = TinyConfig("tiny");
  j["defense"] = {{"kind", "neuguard"}, {"alpha", 2}, {"beta", 30},
                  {"variance_mode", "batch_wise"}, {"amp_infer_fraction", 0.25},
                  {"amp_factor", 2}};
  const ExperimentConfig c = ParseExperimentConfig(j.dump(), dir_);
  EXPECT_EQ(c.name, "tiny");
  EXPECT_EQ(c.seeds.split, 3u);
  EXPECT_EQ(c.dataset.synthetic.num_classes, 3);
  EXPECT_EQ(c.splits.known_nonmembers, 30u);
  ASSERT_EQ(c.layers.size(), 2u);
  EXPECT_EQ(c.layers[1].activation, nn::Activation::kSoftmax);
  EXPECT_EQ(c.defense.kind, DefenseKind::kNeuGuard);
  EXPECT_EQ(c.defense.neuguard.beta, 30.0);
  EXPECT_EQ(c.defense.neuguard.variance_mode, reg::VarianceMode::kBatchWise);
  EXPECT_EQ(c.attacks.sorted_nn.sorted_hidden, std::vector<int>{8});
  EXPECT_EQ(c.attacks.sorted_nn.seed, 4u);
  EXPECT_EQ(c.attacks.label_only.max_steps, 40);
  EXPECT_EQ(c.attacks.enabled.size(), std::size(kAttackNames));
  EXPECT_EQ(c.report.output_dir, dir_ / "out" / "tiny");
  EXPECT_NE(InferenceScaler(c), nullptr);
}

TEST_F(HarnessTest, Defaults) {
  json j = TinyConfig("d");
  j.erase("attacks");
  j.erase("report");
  const ExperimentConfig c = ParseExperimentConfig(j.dump(), dir_);
  EXPECT_EQ(c.report.output_dir, dir_ / "runs" / "d");
  EXPECT_EQ(c.report.histogram_bins, 100);
  EXPECT_EQ(c.attacks.unsorted_nsh.epochs, 200);
  EXPECT_EQ(c.attacks.sorted_nn.decay_epochs, (std::set<int>{40, 90}));
  EXPECT_TRUE(c.attacks.is_enabled("label_only"));
  EXPECT_EQ(InferenceScaler(c), nullptr);
}

TEST_F(HarnessTest, EarlyStopOverridesEpochs) {
  json j = TinyConfig("e");
  j["defense"] = {{"kind", "early_stop"}, {"epochs", 2}};
  EXPECT_EQ(ParseExperimentConfig(j.dump(), dir_).effective_epochs(), 2);
}

TEST_F(HarnessTest, RejectsUnknownKeys) {
  json j = TinyConfig("u");
  j["colour"] = "blue";
  EXPECT_NE(ConfigErrorText(j, dir_).find("colour"), std::string::npos);
  j = TinyConfig("u");
  j["train"]["momentum"] = 0.9;
  EXPECT_NE(ConfigErrorText(j, dir_).find("train.momentum"), std::string::npos);
  j = TinyConfig("u");
  j["attacks"]["enabled"] = {"confidence", "shadow"};
  EXPECT_NE(ConfigErrorText(j, dir_).find("shadow"), std::string::npos);
}

TEST_F(HarnessTest, MissingFieldsAreNamed) {
  json j = TinyConfig("m");
  j["dataset"] = {{"kind", "csv"}};
  EXPECT_NE(ConfigErrorText(j, dir_).find("dataset.path"), std::string::npos)
      << ConfigErrorText(j, dir_);
  j["dataset"]["path"] = "missing.csv";
  EXPECT_NE(ConfigErrorText(j, dir_).find("dataset.path"), std::string::npos);
  j = TinyConfig("m");
  j["train"].erase("epochs");
  EXPECT_NE(ConfigErrorText(j, dir_).find("train.epochs"), std::string::npos);
  j = TinyConfig("m");
  j["seeds"].erase("attack");
  EXPECT_NE(ConfigErrorText(j, dir_).find("seeds.attack"), std::string::npos);
  j = TinyConfig("m");
  j["train"]["batch_size"] = "big";
  EXPECT_NE(ConfigErrorText(j, dir_).find("train.batch_size"), std::string::npos);
  EXPECT_THROW(ParseExperimentConfig("{ not json", dir_), ConfigError);
  EXPECT_THROW(LoadExperimentConfig(dir_ / "nope.json"), ConfigError);
}

TEST_F(HarnessTest, CsvDatasetResolvesRelativeToConfig) {
  std::ofstream(dir_ / "tiny.csv") << "a,b,label\n1,2,0\n3,4,1\n5,6,0\n7,8,1\n";
  json j = TinyConfig("c");
  j["dataset"] = {{"kind", "csv"}, {"path", "tiny.csv"}};
  const ExperimentConfig c = LoadExperimentConfig(Write("c.json", j));
  EXPECT_EQ(c.dataset.kind, DatasetKind::kCsv);
  EXPECT_EQ(c.dataset.csv_path, dir_ / "tiny.csv");
}

TEST_F(HarnessTest, TrainOneEpoch) {
  json j = TinyConfig("one");
  j["train"]["epochs"] = 1;
  std::ostringstream log;
  ASSERT_EQ(CmdTrain(Write("one.json", j), log), kExitOk) << log.str();
  const fs::path out = Out("one");
  EXPECT_TRUE(fs::exists(out / "checkpoint.ngck"));
  EXPECT_EQ(nn::LoadCheckpoint(out / "checkpoint.ngck").output_width(), 3);
  const std::string csv = Slurp(out / "train_log.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2) << csv;
  EXPECT_TRUE(ReadJson(out / "splits.json").at("splits").contains("eval_members"));
  EXPECT_EQ(ReadJson(out / "timing.json").at("epochs"), 1);
}

TEST_F(HarnessTest, ConfigErrorsExitTwoBeforeAnyWork) {
  json j = TinyConfig("bad");
  j["dataset"] = {{"kind", "csv"}};
  std::ostringstream log;
  const fs::path cfg = Write("bad.json", j);
  EXPECT_EQ(CmdTrain(cfg, log), kExitConfigError);
  EXPECT_NE(log.str().find("dataset.path"), std::string::npos) << log.str();
  EXPECT_EQ(CmdAttack(cfg, dir_ / "x.ngck", log), kExitConfigError);
  EXPECT_FALSE(fs::exists(Out("bad")));
  EXPECT_EQ(CmdTrain(dir_ / "absent.json", log), kExitConfigError);
}

TEST_F(HarnessTest, RuntimeErrorsExitOne) {
  std::ostringstream log;
  const fs::path cfg = Write("r.json", TinyConfig("r"));
  EXPECT_EQ(CmdAttack(cfg, dir_ / "missing.ngck", log), kExitRuntimeError);
  json big = TinyConfig("big");
  big["splits"]["known_members"] = 1000;
  EXPECT_EQ(CmdTrain(Write("big.json", big), log), kExitRuntimeError);
}

TEST_F(HarnessTest, DefenseChangesCheckpoint) {
  json base = TinyConfig("base");
  json ng = TinyConfig("ng");
  ng["defense"] = {{"kind", "neuguard"}, {"alpha", 1}, {"beta", 30}};
  std::ostringstream log;
  ASSERT_EQ(CmdTrain(Write("base.json", base), log), kExitOk) << log.str();
  ASSERT_EQ(CmdTrain(Write("ng.json", ng), log), kExitOk) << log.str();
  const nn::NetworkModel a = nn::LoadCheckpoint(Out("base") / "checkpoint.ngck");
  const nn::NetworkModel b = nn::LoadCheckpoint(Out("ng") / "checkpoint.ngck");
  EXPECT_NE(a.weights[0], b.weights[0]);
}

json WithoutTiming(json report) {
  report.erase("inference_median_batch_seconds");
  return report;
}

TEST_F(HarnessTest, TrainAttackIsReproducible) {
  std::ostringstream log;
  for (const char* name : {"a", "b"}) {
    json j = TinyConfig(name);
    j["name"] = "same";
    const fs::path cfg = Write(std::string(name) + ".json", j);
    ASSERT_EQ(CmdTrain(cfg, log), kExitOk) << log.str();
    ASSERT_EQ(CmdAttack(cfg, Out(name) / "checkpoint.ngck", log), kExitOk) << log.str();
  }
  EXPECT_EQ(Slurp(Out("a") / "checkpoint.ngck"), Slurp(Out("b") / "checkpoint.ngck"));
  EXPECT_EQ(Slurp(Out("a") / "scores_members.jsonl"), Slurp(Out("b") / "scores_members.jsonl"));
  EXPECT_EQ(WithoutTiming(ReadJson(Out("a") / "attack_report.json")),
            WithoutTiming(ReadJson(Out("b") / "attack_report.json")));
}

TEST_F(HarnessTest, AttackReportContents) {
  std::ostringstream log;
  const fs::path cfg = Write("r.json", TinyConfig("r"));
  ASSERT_EQ(CmdTrain(cfg, log), kExitOk) << log.str();
  ASSERT_EQ(CmdAttack(cfg, Out("r") / "checkpoint.ngck", log), kExitOk) << log.str();
  const json r = ReadJson(Out("r") / "attack_report.json");
  const json& a = r.at("attacks");
  for (const char* name : {"confidence", "entropy", "modified_entropy"}) {
    ASSERT_TRUE(a.contains(name)) << name;
    const double acc = a.at(name).at("accuracy");
    EXPECT_GE(acc, 0.0);
    EXPECT_LE(acc, 1.0);
    EXPECT_EQ(a.at(name).at("class_thresholds").size(), 3u);
  }
  EXPECT_TRUE(a.contains("sorted_nn"));
  EXPECT_TRUE(a.contains("unsorted_nsh"));
  EXPECT_TRUE(a.contains("label_only"));
  const double gap = r.at("accuracy_gap").at("gap");
  EXPECT_NEAR(a.at("correctness").at("accuracy").get<double>(), 0.5 * gap + 0.5, 1e-12);
  EXPECT_LT(r.at("correctness_identity_residual").get<double>(), 1e-12);
  EXPECT_EQ(r.at("modified_entropy_distance").at("bins"), 10);
  EXPECT_EQ(ReadJsonl(Out("r") / "scores_members.jsonl").size(), 20u);
  EXPECT_TRUE(ReadJsonl(Out("r") / "scores_members.jsonl")[0].boundary_distance.has_value());
}

TEST_F(HarnessTest, MetricCalibrationNeverBelowHalf) {
  const ExperimentConfig c = ParseExperimentConfig(TinyConfig("cal").dump(), dir_);
  const data::Dataset d = BuildExperimentDataset(c);
  const nn::TrainResult t = TrainTarget(c, d);
  const AttackReport r = RunAttacks(c, d, t.model);
  ASSERT_EQ(r.metric_attacks.size(), 3u);
  ASSERT_TRUE(r.correctness.has_value());
  for (const auto& [name, m] : r.metric_attacks) {
    EXPECT_GE(m.thresholds.global_calibration_accuracy, 0.5) << name;
    for (const auto& [y, acc] : m.thresholds.calibration_accuracy) {
      EXPECT_GE(acc, 0.5) << name << " class " << y;
      EXPECT_LE(acc, 1.0);
    }
  }
}

TEST_F(HarnessTest, DisabledAttacksAreAbsent) {
  json j = TinyConfig("off");
  j["attacks"]["enabled"] = {"correctness", "confidence"};
  std::ostringstream log;
  const fs::path cfg = Write("off.json", j);
  ASSERT_EQ(CmdTrain(cfg, log), kExitOk) << log.str();
  ASSERT_EQ(CmdAttack(cfg, Out("off") / "checkpoint.ngck", log), kExitOk) << log.str();
  const json a = ReadJson(Out("off") / "attack_report.json").at("attacks");
  EXPECT_FALSE(a.contains("label_only"));
  EXPECT_FALSE(a.contains("sorted_nn"));
  EXPECT_FALSE(a.contains("entropy"));
  EXPECT_TRUE(a.contains("confidence"));
  EXPECT_FALSE(ReadJsonl(Out("off") / "scores_members.jsonl")[0].boundary_distance.has_value());
}

TEST_F(HarnessTest, DistanceCommand) {
  std::ostringstream log;
  const fs::path cfg = Write("d.json", TinyConfig("d"));
  ASSERT_EQ(CmdTrain(cfg, log), kExitOk) << log.str();
  ASSERT_EQ(CmdAttack(cfg, Out("d") / "checkpoint.ngck", log), kExitOk) << log.str();
  const fs::path m = Out("d") / "scores_members.jsonl";
  const fs::path n = Out("d") / "scores_nonmembers.jsonl";

  std::ostringstream same;
  ASSERT_EQ(CmdDistance(m, m, 20, same, log), kExitOk) << log.str();
  const json s = json::parse(same.str());
  EXPECT_EQ(s.at("euclidean"), 0.0);
  EXPECT_EQ(s.at("kl"), 0.0);
  EXPECT_EQ(s.at("tv"), 0.0);

  std::ostringstream diff;
  ASSERT_EQ(CmdDistance(m, n, 20, diff, log), kExitOk);
  EXPECT_EQ(json::parse(diff.str()).at("count_a"), 20);

  std::ostringstream ignored;
  EXPECT_EQ(CmdDistance(m, n, 0, ignored, log), kExitConfigError);
  EXPECT_EQ(CmdDistance(m, dir_ / "none.jsonl", 10, ignored, log), kExitRuntimeError);
}

TEST_F(HarnessTest, ReportCommand) {
  std::ostringstream log;
  fs::create_directories(dir_ / "empty");
  EXPECT_EQ(CmdReport(dir_ / "empty", log), kExitConfigError);
  EXPECT_EQ(CmdReport(dir_ / "does_not_exist", log), kExitConfigError);

  json base = TinyConfig("baseline");
  json ng = TinyConfig("neuguard");
  ng["defense"] = {{"kind", "neuguard"}, {"alpha", 1}, {"beta", 30}};
  for (const json& j : {base, ng}) {
    const std::string name = j.at("name");
    const fs::path cfg = Write(name + ".json", j);
    ASSERT_EQ(CmdTrain(cfg, log), kExitOk) << log.str();
    ASSERT_EQ(CmdAttack(cfg, Out(name) / "checkpoint.ngck", log), kExitOk) << log.str();
  }
  ASSERT_EQ(CmdReport(dir_ / "out", log), kExitOk) << log.str();
  const std::string csv = Slurp(dir_ / "out" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3) << csv;
  EXPECT_NE(csv.find("train_overhead"), std::string::npos);
  const json r = ReadJson(dir_ / "out" / "report.json");
  EXPECT_EQ(r.at("baseline"), "baseline");
  ASSERT_EQ(r.at("runs").size(), 2u);
  for (const json& row : r.at("runs")) {
    if (row.at("run") == "baseline") {
      EXPECT_EQ(row.at("train_overhead"), 1.0);
      EXPECT_EQ(row.at("inference_overhead"), 1.0);
    } else {
      EXPECT_GT(row.at("train_overhead").get<double>(), 0.0);
    }
    EXPECT_EQ(row.at("attacks").size(), std::size(kAttackNames));
  }
}

}  // namespace
}  // namespace neuguard::harness
