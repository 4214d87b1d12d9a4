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
#include <cmath>
#include <functional>
#include <sstream>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "neuguard/data/dataset.h"
#include "neuguard/data/generators.h"
#include "neuguard/data/splits.h"
#include "neuguard/nn/model.h"
#include "neuguard/nn/optimizer.h"
#include "neuguard/nn/train.h"

namespace neuguard::data {
namespace {

std::set<std::size_t> AsSet(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

bool Disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const auto sa = AsSet(a);
  return std::none_of(b.begin(), b.end(), [&](std::size_t i) { return sa.count(i) > 0; });
}

bool Subset(const std::vector<std::size_t>& sub, const std::vector<std::size_t>& super) {
  const auto s = AsSet(super);
  return std::all_of(sub.begin(), sub.end(), [&](std::size_t i) { return s.count(i) > 0; });
}

std::string ErrorText(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(Synthetic, SameSeedIsBitwiseIdentical) {
  SyntheticConfig c;
  c.per_class_train = 5;
  c.per_class_test = 7;
  const Dataset a = GenerateSynthetic(c, 11);
  const Dataset b = GenerateSynthetic(c, 11);
  EXPECT_EQ(DatasetHash(a), DatasetHash(b));
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.splits, b.splits);
  EXPECT_NE(DatasetHash(a), DatasetHash(GenerateSynthetic(c, 12)));
}

TEST(Synthetic, ShapeAndSplits) {
  SyntheticConfig c;
  c.num_classes = 4;
  c.dim = 6;
  c.per_class_train = 3;
  c.per_class_test = 5;
  const Dataset d = GenerateSynthetic(c, 1);
  EXPECT_EQ(d.size(), 32u);
  EXPECT_EQ(d.dim(), 6);
  EXPECT_EQ(d.num_classes, 4);
  EXPECT_EQ(d.split_indices(split::kTrain).size(), 12u);
  EXPECT_EQ(d.split_indices(split::kTest).size(), 20u);
  EXPECT_TRUE(Disjoint(d.split_indices(split::kTrain), d.split_indices(split::kTest)));
  std::vector<int> per_class(4, 0);
  for (int y : d.SplitLabels(split::kTrain)) ++per_class[y];
  EXPECT_EQ(per_class, std::vector<int>(4, 3));
  EXPECT_NO_THROW(ValidateDataset(d));
}

TEST(Synthetic, ZeroSpreadIsNearestCenterSeparable) {
  SyntheticConfig c;
  c.num_classes = 5;
  c.dim = 8;
  c.per_class_train = 10;
  c.per_class_test = 10;
  c.cluster_spread = 0.0;
  const Dataset d = GenerateSynthetic(c, 3);
  // Without noise every sample sits on its class center.
  std::vector<Vector> center(5);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vector x = d.features.row(i).transpose();
    if (center[d.labels[i]].size() == 0) center[d.labels[i]] = x;
    EXPECT_LT((x - center[d.labels[i]]).norm(), 1e-12);
    EXPECT_NEAR(x.norm(), 1.0, 1e-12);
  }
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) EXPECT_GT((center[a] - center[b]).norm(), 1e-3);
  }

  const nn::NetworkModel m = nn::BuildModel(
      nn::MakeChain({8, 32, 5}, nn::Activation::kTanh, nn::Activation::kSoftmax), 4);
  nn::OptimizerConfig opt;
  opt.kind = nn::OptimizerKind::kAdam;
  opt.learning_rate = 1e-2;
  nn::TrainConfig tc;
  tc.epochs = 60;
  tc.batch_size = 16;
  tc.optimizer = opt;
  tc.seed = 5;
  const nn::TrainResult r = nn::Train(m, d, tc);
  EXPECT_EQ(nn::Accuracy(r.model, d.SplitFeatures(split::kTrain), d.SplitLabels(split::kTrain)),
            1.0);
}

TEST(Synthetic, RejectsBadCounts) {
  SyntheticConfig c;
  c.per_class_train = 0;
  EXPECT_THROW(GenerateSynthetic(c, 1), ConfigError);
  c = {};
  c.dim = -2;
  EXPECT_THROW(GenerateSynthetic(c, 1), ConfigError);
  c = {};
  c.num_classes = 1;
  EXPECT_THROW(GenerateSynthetic(c, 1), ConfigError);
}

TEST(Csv, ThreeRowsTwoFeatures) {
  const Dataset d = ParseTabularCsv("f1,f2,label\n1.5,2,0\n-3,4e-1,1\n5,6,0\n");
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.dim(), 2);
  EXPECT_EQ(d.num_classes, 2);
  EXPECT_EQ(d.provenance, Provenance::kTabular);
  EXPECT_EQ(d.features(1, 1), 0.4);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
}

TEST(Csv, LabelColumnMayComeFirst) {
  const Dataset d = ParseTabularCsv("label,a\n1,7\n0,8\n");
  EXPECT_EQ(d.features(0, 0), 7.0);
  EXPECT_EQ(d.labels, (std::vector<int>{1, 0}));
}

TEST(Csv, NonNumericCellCitesCoordinates) {
  const std::string msg =
      ErrorText([] { ParseTabularCsv("label,f1,f2\n0,1,2\n1,3,abc\n"); });
  EXPECT_NE(msg.find("(2,3)"), std::string::npos) << msg;
  EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
}

TEST(Csv, HundredClasses) {
  std::string text = "x,label\n";
  for (int y = 0; y < 100; ++y) text += std::to_string(y * 0.5) + "," + std::to_string(y) + "\n";
  EXPECT_EQ(ParseTabularCsv(text).num_classes, 100);
}

TEST(Csv, Errors) {
  EXPECT_THROW(ParseTabularCsv(""), Error);
  EXPECT_THROW(ParseTabularCsv("a,label\n"), Error);
  EXPECT_THROW(ParseTabularCsv("a,b\n1,2\n"), Error);
  EXPECT_NE(ErrorText([] { ParseTabularCsv("a,label\n1,0\n2\n"); }).find("ragged"),
            std::string::npos);
  EXPECT_THROW(ParseTabularCsv("a,label\n1,0\n2,2\n"), Error);  // class 1 missing
  EXPECT_THROW(ParseTabularCsv("a,label\n1,x\n"), Error);
  EXPECT_THROW(ParseTabularCsv("a,label\n1,-1\n"), Error);
  EXPECT_THROW(LoadTabularCsv("/nonexistent/neuguard.csv"), Error);
}

Dataset Plain(std::size_t n) {
  Dataset d;
  d.features = Matrix::Zero(static_cast<Eigen::Index>(n), 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.features(static_cast<Eigen::Index>(i), 0) = static_cast<double>(i);
    d.labels.push_back(static_cast<int>(i % 2));
  }
  d.num_classes = 2;
  return d;
}

void CheckSchema(const Dataset& d) {
  using namespace split;
  const auto& tr = d.split_indices(kTrain);
  const auto& te = d.split_indices(kTest);
  EXPECT_TRUE(Disjoint(tr, te));
  EXPECT_TRUE(Subset(d.split_indices(kKnownMembers), tr));
  EXPECT_TRUE(Subset(d.split_indices(kEvalMembers), tr));
  EXPECT_TRUE(Subset(d.split_indices(kKnownNonMembers), te));
  EXPECT_TRUE(Subset(d.split_indices(kEvalNonMembers), te));
  EXPECT_TRUE(Disjoint(d.split_indices(kKnownMembers), d.split_indices(kEvalMembers)));
  EXPECT_TRUE(Disjoint(d.split_indices(kKnownNonMembers), d.split_indices(kEvalNonMembers)));
  EXPECT_EQ(d.split_indices(kEvalMembers).size(), d.split_indices(kEvalNonMembers).size());
  EXPECT_NO_THROW(ValidateDataset(d));
}

TEST(Splits, SixSplitsPopulated) {
  SplitConfig c;
  c.train_size = 100;
  c.test_size = 100;
  c.known_members = 50;
  c.known_nonmembers = 50;
  c.eval_members = 50;
  c.eval_nonmembers = 50;
  const Dataset d = MakeMiaSplits(Plain(200), c, 9);
  for (auto name : {split::kTrain, split::kTest}) EXPECT_EQ(d.split_indices(name).size(), 100u);
  for (auto name : {split::kKnownMembers, split::kKnownNonMembers, split::kEvalMembers,
                    split::kEvalNonMembers}) {
    EXPECT_EQ(d.split_indices(name).size(), 50u) << name;
  }
  CheckSchema(d);
}

TEST(Splits, EvalSidesTruncatedToSmaller) {
  SplitConfig c;
  c.train_size = 100;
  c.test_size = 100;
  c.eval_members = 60;
  c.eval_nonmembers = 40;
  const Dataset d = MakeMiaSplits(Plain(200), c, 9);
  EXPECT_EQ(d.split_indices(split::kEvalMembers).size(), 40u);
  EXPECT_EQ(d.split_indices(split::kEvalNonMembers).size(), 40u);
  CheckSchema(d);
}

TEST(Splits, KeepsExistingTrainTest) {
  SyntheticConfig g;
  g.per_class_train = 4;
  g.per_class_test = 6;
  const Dataset base = GenerateSynthetic(g, 2);
  SplitConfig c;
  c.known_members = 20;
  c.known_nonmembers = 30;
  c.eval_members = 20;
  c.eval_nonmembers = 20;
  const Dataset d = MakeMiaSplits(base, c, 1);
  EXPECT_EQ(d.split_indices(split::kTrain), base.split_indices(split::kTrain));
  EXPECT_EQ(d.split_indices(split::kTest), base.split_indices(split::kTest));
  CheckSchema(d);
}

TEST(Splits, ShortfallIsListed) {
  SplitConfig c;
  c.train_size = 10;
  c.test_size = 10;
  c.known_members = 8;
  c.eval_members = 5;
  c.eval_nonmembers = 5;
  const std::string msg = ErrorText([&] { MakeMiaSplits(Plain(20), c, 1); });
  EXPECT_NE(msg.find("members: need 13, have 10"), std::string::npos) << msg;
  EXPECT_EQ(msg.find("non-members"), std::string::npos) << msg;

  c.train_size = 15;
  EXPECT_THROW(MakeMiaSplits(Plain(20), c, 1), Error);
}

TEST(Splits, TexasProportions) {
  SplitConfig c;
  c.train_size = 10000;
  c.known_members = 5000;
  c.known_nonmembers = 10000;
  c.eval_members = 5000;
  c.eval_nonmembers = 5000;
  const Dataset d = MakeMiaSplits(Plain(67330), c, 3);
  EXPECT_EQ(d.split_indices(split::kTrain).size(), 10000u);
  EXPECT_EQ(d.split_indices(split::kTest).size(), 57330u);
  EXPECT_EQ(d.split_indices(split::kKnownMembers).size(), 5000u);
  EXPECT_EQ(d.split_indices(split::kKnownNonMembers).size(), 10000u);
  CheckSchema(d);
}

TEST(Splits, DeterministicPerSeed) {
  SplitConfig c;
  c.train_size = 50;
  c.known_members = 10;
  c.eval_members = 10;
  c.eval_nonmembers = 10;
  EXPECT_EQ(MakeMiaSplits(Plain(100), c, 4).splits, MakeMiaSplits(Plain(100), c, 4).splits);
  EXPECT_NE(MakeMiaSplits(Plain(100), c, 4).splits, MakeMiaSplits(Plain(100), c, 5).splits);
}

TEST(Splits, JsonListsEverySplitAndHash) {
  SplitConfig c;
  c.train_size = 4;
  c.test_size = 4;
  c.eval_members = 2;
  c.eval_nonmembers = 2;
  const Dataset d = MakeMiaSplits(Plain(8), c, 1);
  const std::string json = SplitsToJson(d);
  for (const auto& [name, idx] : d.splits) EXPECT_NE(json.find("\"" + name + "\""), std::string::npos);
  std::ostringstream hex;
  hex << std::hex << DatasetHash(d);
  EXPECT_NE(json.find("\"" + hex.str() + "\""), std::string::npos) << json;
}

TEST(Dataset, ValidateCatchesOverlap) {
  Dataset d = Plain(4);
  d.splits["train"] = {0, 1};
  d.splits["test"] = {1, 2};
  EXPECT_THROW(ValidateDataset(d), Error);
  d.splits["test"] = {2, 7};
  EXPECT_THROW(ValidateDataset(d), Error);
  d.splits["test"] = {2, 3};
  d.splits["eval_members"] = {2};
  EXPECT_THROW(ValidateDataset(d), Error);
}

TEST(Dataset, StandardizeUsesSplitStatistics) {
  Dataset d = Plain(6);
  d.features.conservativeResize(6, 2);
  d.features.col(1).setConstant(3.0);
  d.splits["train"] = {0, 1, 2};
  StandardizeOnSplit(d, "train");
  const Matrix tr = d.SplitFeatures("train");
  EXPECT_NEAR(tr.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(tr.col(0).squaredNorm() / 3.0, 1.0, 1e-12);
  // Row 3 was 3.0: (3 - 1) / sqrt(2/3).
  EXPECT_NEAR(d.features(3, 0), 2.0 / std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_EQ(d.features(4, 1), 0.0);
  EXPECT_THROW(d.split_indices("nope"), Error);
}

}  // namespace
}  // namespace neuguard::data
