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


#include "neuguard/harness/commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "neuguard/attacks/score_record.h"
#include "neuguard/data/splits.h"
#include "neuguard/harness/experiment.h"
#include "neuguard/nn/checkpoint.h"

namespace neuguard::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kCheckpointName[] = "checkpoint.ngck";
constexpr char kReportName[] = "attack_report.json";
constexpr char kTimingName[] = "timing.json";

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string CsvNumber(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Maps exceptions to exit codes.
template <typename Fn>
int Guarded(std::ostream& log, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

std::optional<double> AttackAccuracy(const json& attacks, const std::string& name) {
  if (!attacks.contains(name)) return std::nullopt;
  return attacks.at(name).at("accuracy").get<double>();
}

}  // namespace

int CmdTrain(const fs::path& config_path, std::ostream& log) {
  return Guarded(log, [&] {
    const ExperimentConfig config = LoadExperimentConfig(config_path);
    const data::Dataset dataset = BuildExperimentDataset(config);
    BuildTargetModel(config, dataset);  // surfaces shape errors before training
    fs::create_directories(config.report.output_dir);
    const nn::TrainResult result = TrainTarget(config, dataset);

    const fs::path out = config.report.output_dir;
    nn::SaveCheckpoint(result.model, out / kCheckpointName,
                       {{"name", config.name},
                        {"defense", std::string(DefenseName(config.defense.kind))},
                        {"dataset_hash", std::to_string(data::DatasetHash(dataset))}});
    std::ostringstream csv;
    csv << "epoch,train_loss,train_accuracy,test_accuracy,median_batch_seconds\n";
    for (const nn::EpochLog& e : result.log) {
      csv << e.epoch << ',' << CsvNumber(e.train_loss) << ','
          << CsvNumber(e.train_accuracy) << ','
          << (e.test_accuracy ? CsvNumber(*e.test_accuracy) : "") << ','
          << CsvNumber(e.median_batch_seconds) << '\n';
    }
    WriteText(out / "train_log.csv", csv.str());
    WriteText(out / "splits.json", data::SplitsToJson(dataset));
    json timing = {{"name", config.name},
                   {"defense", std::string(DefenseName(config.defense.kind))},
                   {"epochs", config.effective_epochs()},
                   {"median_train_batch_seconds", result.median_batch_seconds}};
    WriteText(out / kTimingName, timing.dump(2) + "\n");
    log << "trained " << config.name << " for " << config.effective_epochs()
        << " epochs -> " << (out / kCheckpointName).string() << '\n';
  });
}

int CmdAttack(const fs::path& config_path, const fs::path& checkpoint_path,
              std::ostream& log) {
  return Guarded(log, [&] {
    const ExperimentConfig config = LoadExperimentConfig(config_path);
    const data::Dataset dataset = BuildExperimentDataset(config);
    const nn::NetworkModel model = nn::LoadCheckpoint(checkpoint_path);
    if (model.input_width() != dataset.dim() ||
        model.output_width() != dataset.num_classes) {
      throw Error("checkpoint shape " + std::to_string(model.input_width()) + "->" +
                  std::to_string(model.output_width()) +
                  " does not fit the dataset");
    }
    const AttackReport report = RunAttacks(config, dataset, model);
    const fs::path out = config.report.output_dir;
    fs::create_directories(out);
    attacks::WriteJsonl(out / "scores_members.jsonl", report.eval_members);
    attacks::WriteJsonl(out / "scores_nonmembers.jsonl", report.eval_nonmembers);
    WriteText(out / kReportName, AttackReportToJson(report) + "\n");
    log << "attack report -> " << (out / kReportName).string() << '\n';
  });
}

int CmdDistance(const fs::path& dump_a, const fs::path& dump_b, int bins,
                std::ostream& out, std::ostream& log) {
  return Guarded(log, [&] {
    if (bins < 1) throw ConfigError("--bins must be >= 1");
    const auto a = attacks::ReadJsonl(dump_a);
    const auto b = attacks::ReadJsonl(dump_b);
    if (a.empty() || b.empty()) throw Error("score dump is empty");
    const eval::DistanceReport d = ModifiedEntropyDistance(a, b, bins);
    json j = {{"bins", bins},
              {"count_a", a.size()},
              {"count_b", b.size()},
              {"euclidean", d.euclidean},
              {"kl", d.kl},
              {"tv", d.tv}};
    out << j.dump(2) << '\n';
  });
}

int CmdReport(const fs::path& run_dir, std::ostream& log) {
  return Guarded(log, [&] {
    if (!fs::is_directory(run_dir)) {
      throw ConfigError("run directory not found: " + run_dir.string());
    }
    std::vector<fs::path> reports;
    for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
      if (entry.is_regular_file() && entry.path().filename() == kReportName) {
        reports.push_back(entry.path());
      }
    }
    if (reports.empty()) {
      throw ConfigError("no " + std::string(kReportName) + " under " + run_dir.string());
    }
    std::sort(reports.begin(), reports.end());

    struct Run {
      json report;
      std::optional<double> train_seconds;
    };
    std::vector<Run> runs;
    for (const fs::path& p : reports) {
      Run r{ReadJsonFile(p), std::nullopt};
      const fs::path timing = p.parent_path() / kTimingName;
      if (fs::exists(timing)) {
        r.train_seconds = ReadJsonFile(timing).at("median_train_batch_seconds").get<double>();
      }
      runs.push_back(std::move(r));
    }
    const Run* baseline = nullptr;
    for (const Run& r : runs) {
      if (r.report.at("defense") == "none") {
        baseline = &r;
        break;
      }
    }
    // Missing timings are NaN.
    auto ratio = [](double v, double base) -> json {
      if (!std::isfinite(v) || !(base > 0.0)) return nullptr;
      return v / base;
    };

    std::ostringstream csv;
    csv << "run,defense,test_accuracy";
    for (std::string_view a : kAttackNames) csv << ',' << a;
    csv << ",train_batch_seconds,inference_batch_seconds,train_overhead,"
           "inference_overhead\n";
    json rows = json::array();
    const double base_train =
        baseline ? baseline->train_seconds.value_or(NAN) : NAN;
    const double base_infer =
        baseline ? baseline->report.at("inference_median_batch_seconds").get<double>()
                 : NAN;
    for (const Run& r : runs) {
      const json& rep = r.report;
      const double infer = rep.at("inference_median_batch_seconds").get<double>();
      json row = {{"run", rep.at("name")},
                  {"defense", rep.at("defense")},
                  {"test_accuracy", rep.at("test_accuracy")}};
      json attacks = json::object();
      csv << rep.at("name").get<std::string>() << ','
          << rep.at("defense").get<std::string>() << ','
          << CsvNumber(rep.at("test_accuracy").get<double>());
      for (std::string_view a : kAttackNames) {
        const auto acc = AttackAccuracy(rep.at("attacks"), std::string(a));
        csv << ',' << (acc ? CsvNumber(*acc) : "");
        if (acc) attacks[std::string(a)] = *acc;
      }
      row["attacks"] = attacks;
      row["train_batch_seconds"] = r.train_seconds ? json(*r.train_seconds) : json(nullptr);
      row["inference_batch_seconds"] = infer;
      row["train_overhead"] = ratio(r.train_seconds.value_or(NAN), base_train);
      row["inference_overhead"] = ratio(infer, base_infer);
      auto cell = [](const json& v) {
        return v.is_number() ? CsvNumber(v.get<double>()) : std::string();
      };
      csv << ',' << cell(row["train_batch_seconds"]) << ','
          << cell(row["inference_batch_seconds"]) << ','
          << cell(row["train_overhead"]) << ',' << cell(row["inference_overhead"])
          << '\n';
      rows.push_back(std::move(row));
    }
    json summary = {{"baseline", baseline ? baseline->report.at("name") : json(nullptr)},
                    {"runs", rows}};
    WriteText(run_dir / "report.csv", csv.str());
    WriteText(run_dir / "report.json", summary.dump(2) + "\n");
    log << "report over " << runs.size() << " run(s) -> "
        << (run_dir / "report.csv").string() << '\n';
  });
}

}  // namespace neuguard::harness
