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


#include "neuguard/harness/experiment.h"

#include <cmath>

#include "json.hpp"
#include "neuguard/attacks/boundary.h"
#include "neuguard/attacks/nn_attacks.h"
#include "neuguard/data/generators.h"
#include "neuguard/data/splits.h"
#include "neuguard/reg/regularizers.h"

namespace neuguard::harness {
namespace {

using nlohmann::json;
using attacks::ScoreRecord;

std::vector<ScoreRecord> Concat(std::vector<ScoreRecord> a,
                                const std::vector<ScoreRecord>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

json Real(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "+inf" : (v < 0 ? "-inf" : "nan");
}

json LossJson(const eval::LossSummary& s) {
  return {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"deciles", s.deciles}};
}

}  // namespace

data::Dataset BuildExperimentDataset(const ExperimentConfig& config) {
  data::Dataset ds;
  if (config.dataset.kind == DatasetKind::kSynthetic) {
    ds = data::GenerateSynthetic(config.dataset.synthetic, config.seeds.data);
  } else {
    ds = data::LoadTabularCsv(config.dataset.csv_path);
  }
  ds = data::MakeMiaSplits(std::move(ds), config.splits, config.seeds.split);
  if (config.dataset.standardize) data::StandardizeOnSplit(ds, data::split::kTrain);
  return ds;
}

nn::NetworkModel BuildTargetModel(const ExperimentConfig& config,
                                  const data::Dataset& dataset) {
  if (config.layers.empty()) throw ConfigError("model.layers is empty");
  if (config.layers.back().width != dataset.num_classes) {
    throw ConfigError("model.layers: last layer width " +
                      std::to_string(config.layers.back().width) +
                      " does not match " + std::to_string(dataset.num_classes) +
                      " classes");
  }
  std::vector<nn::LayerSpec> specs;
  int in = dataset.dim();
  for (const LayerSection& l : config.layers) {
    specs.push_back({in, l.width, l.activation});
    in = l.width;
  }
  return nn::BuildModel(specs, config.seeds.model);
}

std::unique_ptr<nn::HiddenScaler> InferenceScaler(const ExperimentConfig& config) {
  if (config.defense.kind != DefenseKind::kNeuGuard) return nullptr;
  const auto& r = config.defense.neuguard;
  auto amp = std::make_unique<reg::TopFractionAmplifier>(r.amp_infer_fraction,
                                                         r.amp_factor);
  if (amp->is_identity()) return nullptr;
  return amp;
}

nn::TrainResult TrainTarget(const ExperimentConfig& config,
                            const data::Dataset& dataset) {
  nn::TrainConfig tc;
  tc.epochs = config.effective_epochs();
  tc.batch_size = config.train.batch_size;
  tc.seed = MixSeed(config.seeds.model, 1);
  tc.optimizer = config.train.optimizer;

  std::unique_ptr<reg::NeuGuardHook> hook;
  std::unique_ptr<reg::TopFractionAmplifier> train_amp;
  const std::unique_ptr<nn::HiddenScaler> infer = InferenceScaler(config);
  if (config.defense.kind == DefenseKind::kNeuGuard) {
    const auto& r = config.defense.neuguard;
    hook = std::make_unique<reg::NeuGuardHook>(dataset.num_classes, r);
    tc.hook = hook.get();
    train_amp = std::make_unique<reg::TopFractionAmplifier>(r.amp_train_fraction,
                                                            r.amp_factor);
    if (!train_amp->is_identity()) tc.train_scaler = train_amp.get();
  }
  tc.eval_scaler = infer.get();
  return nn::Train(BuildTargetModel(config, dataset), dataset, tc);
}

eval::DistanceReport ModifiedEntropyDistance(const std::vector<ScoreRecord>& a,
                                             const std::vector<ScoreRecord>& b,
                                             int bins) {
  std::vector<double> va, vb;
  for (const auto& r : a) va.push_back(attacks::MetricModifiedEntropy(r));
  for (const auto& r : b) vb.push_back(attacks::MetricModifiedEntropy(r));
  const auto [lo, hi] = eval::SharedRange(va, vb);
  return eval::CompareHistograms(eval::BuildHistogram(va, bins, lo, hi),
                                 eval::BuildHistogram(vb, bins, lo, hi));
}

AttackReport RunAttacks(const ExperimentConfig& config,
                        const data::Dataset& dataset,
                        const nn::NetworkModel& model) {
  namespace split = data::split;
  const std::unique_ptr<nn::HiddenScaler> scaler = InferenceScaler(config);
  const nn::HiddenScaler* sc = scaler.get();
  AttackReport rep;
  rep.name = config.name;
  rep.defense = config.defense.kind;
  rep.histogram_bins = config.report.histogram_bins;

  attacks::CollectTiming timing;
  rep.eval_members = attacks::CollectScores(model, dataset, split::kEvalMembers,
                                            true, sc, 256, &timing);
  rep.inference_median_batch_seconds = timing.median_batch_seconds;
  rep.eval_nonmembers =
      attacks::CollectScores(model, dataset, split::kEvalNonMembers, false, sc);
  std::vector<ScoreRecord> known = Concat(
      attacks::CollectScores(model, dataset, split::kKnownMembers, true, sc),
      attacks::CollectScores(model, dataset, split::kKnownNonMembers, false, sc));

  rep.train_accuracy = nn::Accuracy(model, dataset.SplitFeatures(split::kTrain),
                                    dataset.SplitLabels(split::kTrain), sc);
  rep.test_accuracy = nn::Accuracy(model, dataset.SplitFeatures(split::kTest),
                                   dataset.SplitLabels(split::kTest), sc);
  rep.eval_gap = eval::ComputeAccuracyGap(rep.eval_members, rep.eval_nonmembers);

  std::vector<ScoreRecord> ev = Concat(rep.eval_members, rep.eval_nonmembers);
  const double correctness = attacks::CorrectnessAttackAccuracy(ev);
  rep.correctness_residual =
      eval::CorrectnessIdentityResidual(correctness, rep.eval_gap.gap);
  if (config.attacks.is_enabled("correctness")) rep.correctness = correctness;
  rep.variance = eval::ComputeScoreVariance(ev);
  rep.member_loss = eval::ComputeLossDistribution(rep.eval_members).summary;
  rep.nonmember_loss = eval::ComputeLossDistribution(rep.eval_nonmembers).summary;

  for (auto metric : {attacks::MetricKind::kConfidence, attacks::MetricKind::kEntropy,
                      attacks::MetricKind::kModifiedEntropy}) {
    const std::string name(attacks::MetricName(metric));
    if (!config.attacks.is_enabled(name)) continue;
    MetricAttackResult r;
    r.thresholds = attacks::SelectClassThresholds(known, metric,
                                                  attacks::DefaultDirection(metric));
    r.accuracy = attacks::MetricAttackAccuracy(ev, r.thresholds);
    rep.metric_attacks[name] = std::move(r);
  }
  if (config.attacks.is_enabled("sorted_nn")) {
    const auto a = attacks::TrainSortedNnAttack(known, config.attacks.sorted_nn);
    rep.sorted_nn = attacks::AttackAccuracy(a, ev);
  }
  if (config.attacks.is_enabled("unsorted_nsh")) {
    const auto a = attacks::TrainUnsortedNshAttack(known, config.attacks.unsorted_nsh);
    rep.unsorted_nsh = attacks::AttackAccuracy(a, ev);
  }
  if (config.attacks.is_enabled("label_only")) {
    const auto& b = config.attacks.label_only;
    attacks::AttachBoundaryDistances(known, model, dataset, b, sc);
    attacks::AttachBoundaryDistances(rep.eval_members, model, dataset, b, sc);
    attacks::AttachBoundaryDistances(rep.eval_nonmembers, model, dataset, b, sc);
    ev = Concat(rep.eval_members, rep.eval_nonmembers);
    rep.label_only = attacks::LabelOnlyAttack(ev, known);
  }
  rep.modified_entropy_distance = ModifiedEntropyDistance(
      rep.eval_members, rep.eval_nonmembers, config.report.histogram_bins);
  return rep;
}

std::string AttackReportToJson(const AttackReport& r) {
  json j;
  j["name"] = r.name;
  j["defense"] = std::string(DefenseName(r.defense));
  j["train_accuracy"] = r.train_accuracy;
  j["test_accuracy"] = r.test_accuracy;
  j["accuracy_gap"] = {{"eval_member_accuracy", r.eval_gap.train_accuracy},
                       {"eval_nonmember_accuracy", r.eval_gap.test_accuracy},
                       {"gap", r.eval_gap.gap}};
  j["correctness_identity_residual"] = r.correctness_residual;
  j["score_variance"] = {{"members", r.variance.members},
                         {"nonmembers", r.variance.nonmembers}};
  j["loss"] = {{"members", LossJson(r.member_loss)},
               {"nonmembers", LossJson(r.nonmember_loss)}};
  json a = json::object();
  if (r.correctness) a["correctness"] = {{"accuracy", *r.correctness}};
  for (const auto& [name, m] : r.metric_attacks) {
    json thresholds = json::object();
    for (const auto& [label, t] : m.thresholds.per_class) {
      thresholds[std::to_string(label)] = Real(t);
    }
    a[name] = {{"accuracy", m.accuracy},
               {"direction", m.thresholds.direction == attacks::Direction::kMemberIfGE
                                 ? "member_if_ge"
                                 : "member_if_le"},
               {"class_thresholds", thresholds},
               {"global_threshold", Real(m.thresholds.global)}};
  }
  if (r.sorted_nn) a["sorted_nn"] = {{"accuracy", *r.sorted_nn}};
  if (r.unsorted_nsh) a["unsorted_nsh"] = {{"accuracy", *r.unsorted_nsh}};
  if (r.label_only) {
    a["label_only"] = {{"accuracy", r.label_only->accuracy},
                       {"threshold", Real(r.label_only->threshold)}};
  }
  j["attacks"] = a;
  j["modified_entropy_distance"] = {{"bins", r.histogram_bins},
                                    {"euclidean", r.modified_entropy_distance.euclidean},
                                    {"kl", r.modified_entropy_distance.kl},
                                    {"tv", r.modified_entropy_distance.tv}};
  j["inference_median_batch_seconds"] = r.inference_median_batch_seconds;
  return j.dump(2);
}

}  // namespace neuguard::harness
