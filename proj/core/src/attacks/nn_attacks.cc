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


#include "neuguard/attacks/nn_attacks.h"

#include <algorithm>
#include <functional>

#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/data/dataset.h"
#include "neuguard/nn/backward.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/optimizer.h"
#include "neuguard/nn/train.h"

namespace neuguard::attacks {
namespace {

using nn::Activation;

int CheckKnown(const std::vector<ScoreRecord>& known) {
  if (known.empty()) throw Error("no known records for attack training");
  bool any_member = false, any_nonmember = false;
  const int k = known.front().num_classes();
  for (const auto& r : known) {
    any_member |= r.is_member;
    any_nonmember |= !r.is_member;
    if (r.num_classes() != k) throw Error("score width mismatch in known records");
  }
  if (!any_member || !any_nonmember) {
    throw Error("attack training needs both members and non-members");
  }
  return k;
}

Matrix MembershipTargets(const std::vector<ScoreRecord>& records) {
  Matrix t(static_cast<Eigen::Index>(records.size()), 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    t(static_cast<Eigen::Index>(i), 0) = records[i].is_member ? 1.0 : 0.0;
  }
  return t;
}

nn::OptimizerConfig AdamConfig(const AttackTrainConfig& config) {
  nn::OptimizerConfig opt;
  opt.kind = nn::OptimizerKind::kAdam;
  opt.learning_rate = config.learning_rate;
  opt.decay_epochs = config.decay_epochs;
  opt.decay_factor = config.decay_factor;
  return opt;
}

std::vector<int> Widths(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  if (out > 0) w.push_back(out);
  return w;
}

struct NshTraces {
  nn::ForwardTrace score;
  nn::ForwardTrace label;
  nn::ForwardTrace combiner;
};

NshTraces NshForward(const AttackModel& attack, const Matrix& scores,
                     const Matrix& onehot) {
  NshTraces t;
  t.score = nn::ForwardWithTrace(attack.networks[0], scores);
  t.label = nn::ForwardWithTrace(attack.networks[1], onehot);
  Matrix joined(scores.rows(), t.score.output.cols() + t.label.output.cols());
  joined << t.score.output, t.label.output;
  t.combiner = nn::ForwardWithTrace(attack.networks[2], joined);
  return t;
}

void CheckWidth(const AttackModel& attack, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) {
    if (r.num_classes() != attack.num_classes) {
      throw Error("score width " + std::to_string(r.num_classes()) +
                  " does not match attack input width " +
                  std::to_string(attack.num_classes));
    }
  }
}

}  // namespace

AttackTrainConfig DefaultSortedNnConfig() {
  AttackTrainConfig c;
  c.epochs = 100;
  c.decay_epochs = {40, 90};
  return c;
}

AttackTrainConfig DefaultNshConfig() {
  AttackTrainConfig c;
  c.epochs = 200;
  c.decay_epochs = {30};
  return c;
}

Matrix SortedScoreInputs(const std::vector<ScoreRecord>& records) {
  Matrix m = ScoreMatrix(records);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    std::sort(row.begin(), row.end(), std::greater<double>());
  }
  return m;
}

Matrix OneHotLabels(const std::vector<ScoreRecord>& records, int num_classes) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(records.size()), num_classes);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int y = records[i].true_label;
    if (y < 0 || y >= num_classes) {
      throw Error("label " + std::to_string(y) + " out of range for one-hot");
    }
    m(static_cast<Eigen::Index>(i), y) = 1.0;
  }
  return m;
}

AttackModel TrainSortedNnAttack(const std::vector<ScoreRecord>& known,
                                const AttackTrainConfig& config) {
  const int k = CheckKnown(known);
  AttackModel attack;
  attack.kind = AttackKind::kSortedNN;
  attack.num_classes = k;
  nn::NetworkModel net = nn::BuildModel(
      nn::MakeChain(Widths(k, config.sorted_hidden, 1), Activation::kReLU,
                    Activation::kSigmoid),
      MixSeed(config.seed, 1));
  nn::TrainConfig tc;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.seed = MixSeed(config.seed, 2);
  tc.optimizer = AdamConfig(config);
  nn::TrainResult result = nn::TrainRegressor(
      std::move(net), SortedScoreInputs(known), MembershipTargets(known), tc);
  attack.networks.push_back(std::move(result.model));
  return attack;
}

AttackModel TrainUnsortedNshAttack(const std::vector<ScoreRecord>& known,
                                   const AttackTrainConfig& config) {
  const int k = CheckKnown(known);
  if (config.encoder_widths.empty()) throw ConfigError("encoder widths are empty");
  if (config.epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (config.batch_size <= 0) throw ConfigError("batch_size must be positive");
  AttackModel attack;
  attack.kind = AttackKind::kUnsortedNSH;
  attack.num_classes = k;
  const std::vector<int> enc_hidden(config.encoder_widths.begin(),
                                    config.encoder_widths.end() - 1);
  const int enc_out = config.encoder_widths.back();
  // ReLU on every encoder layer, including the encoding itself.
  for (std::uint64_t salt : {11u, 12u}) {
    attack.networks.push_back(nn::BuildModel(
        nn::MakeChain(Widths(k, enc_hidden, enc_out), Activation::kReLU,
                      Activation::kReLU),
        MixSeed(config.seed, salt)));
  }
  attack.networks.push_back(nn::BuildModel(
      nn::MakeChain(Widths(2 * enc_out, config.combiner_hidden, 1),
                    Activation::kReLU, Activation::kSigmoid),
      MixSeed(config.seed, 13)));

  const Matrix scores = ScoreMatrix(known);
  const Matrix onehot = OneHotLabels(known, k);
  const Matrix targets = MembershipTargets(known);
  const nn::OptimizerConfig opt = AdamConfig(config);
  std::vector<nn::OptimizerState> states;
  for (const auto& net : attack.networks) {
    states.push_back(nn::MakeOptimizerState(net, opt));
  }
  const std::size_t n = known.size();
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  const std::uint64_t order_seed = MixSeed(config.seed, 14);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = nn::EpochOrder(n, order_seed, epoch);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      const std::vector<std::size_t> rows(order.begin() + start, order.begin() + end);
      const Matrix s = data::GatherRows(scores, rows);
      const Matrix l = data::GatherRows(onehot, rows);
      const Matrix t = data::GatherRows(targets, rows);
      const NshTraces tr = NshForward(attack, s, l);

      nn::LossSpec spec;
      spec.primary = nn::PrimaryLoss::kMeanSquaredError;
      spec.targets = &t;
      nn::BackwardResult top = nn::Backward(attack.networks[2], tr.combiner, spec,
                                            /*want_input_gradient=*/true);
      const Matrix& dz = top.input_gradient;
      const nn::ForwardTrace* enc[2] = {&tr.score, &tr.label};
      std::vector<nn::Gradients> enc_grads;
      for (int e = 0; e < 2; ++e) {
        const Matrix d_out = dz.middleCols(e * enc_out, enc_out);
        const Matrix d_logits = nn::OutputToLogitGradient(
            Activation::kReLU, enc[e]->logits(), enc[e]->output, d_out);
        enc_grads.push_back(nn::BackpropagateLogits(attack.networks[e], *enc[e],
                                                    d_logits, {}, false)
                                .gradients);
      }
      nn::OptimizerStep(attack.networks[0], enc_grads[0], states[0], epoch);
      nn::OptimizerStep(attack.networks[1], enc_grads[1], states[1], epoch);
      nn::OptimizerStep(attack.networks[2], top.gradients, states[2], epoch);
    }
  }
  return attack;
}

std::vector<double> AttackProbabilities(const AttackModel& attack,
                                        const std::vector<ScoreRecord>& records) {
  if (records.empty()) return {};
  CheckWidth(attack, records);
  Matrix out;
  if (attack.kind == AttackKind::kSortedNN) {
    if (attack.networks.size() != 1) throw Error("sorted attack needs one network");
    out = nn::Predict(attack.networks[0], SortedScoreInputs(records));
  } else {
    if (attack.networks.size() != 3) throw Error("NSH attack needs three networks");
    out = NshForward(attack, ScoreMatrix(records),
                     OneHotLabels(records, attack.num_classes))
              .combiner.output;
  }
  return std::vector<double>(out.data(), out.data() + out.rows());
}

bool IsMemberProbability(double probability) { return probability >= 0.5; }

bool AttackPredict(const AttackModel& attack, const ScoreRecord& record) {
  return IsMemberProbability(AttackProbabilities(attack, {record}).front());
}

double AttackAccuracy(const AttackModel& attack,
                      const std::vector<ScoreRecord>& eval) {
  const std::vector<double> p = AttackProbabilities(attack, eval);
  std::vector<bool> predicted(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) predicted[i] = IsMemberProbability(p[i]);
  return BalancedAccuracy(eval, predicted);
}

}  // namespace neuguard::attacks
