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


#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/attacks/score_record.h"
#include "neuguard/eval/histogram.h"
#include "neuguard/eval/metrics.h"
#include "neuguard/nn/model.h"

namespace neuguard::eval {
namespace {

using attacks::MakeRecord;
using attacks::ScoreRecord;

ScoreRecord Rec(std::initializer_list<double> scores, int y, bool member) {
  Vector s(static_cast<Eigen::Index>(scores.size()));
  Eigen::Index i = 0;
  for (double v : scores) s[i++] = v;
  return MakeRecord(0, s, y, member);
}

// n members of which `correct` are classified correctly, same for the
// non-member side.
std::vector<ScoreRecord> Side(int n, int correct, bool member) {
  std::vector<ScoreRecord> out;
  for (int i = 0; i < n; ++i) out.push_back(Rec({0.7, 0.3}, i < correct ? 0 : 1, member));
  return out;
}

std::vector<ScoreRecord> Concat(std::vector<ScoreRecord> a, const std::vector<ScoreRecord>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(AccuracyGap, PerfectModelHasNoGap) {
  const AccuracyGap g = ComputeAccuracyGap(Side(10, 10, true), Side(10, 10, false));
  EXPECT_EQ(g.train_accuracy, 1.0);
  EXPECT_EQ(g.gap, 0.0);
}

TEST(AccuracyGap, HandArithmetic) {
  const AccuracyGap g = ComputeAccuracyGap(Side(200, 175, true), Side(200, 89, false));
  EXPECT_EQ(g.train_accuracy, 0.875);
  EXPECT_EQ(g.test_accuracy, 0.445);
  EXPECT_NEAR(g.gap, 0.430, 1e-15);
  const AccuracyGap neg = ComputeAccuracyGap(Side(4, 1, true), Side(4, 3, false));
  EXPECT_EQ(neg.gap, -0.5);
  EXPECT_THROW(ComputeAccuracyGap({}, Side(4, 3, false)), Error);
}

TEST(AccuracyGap, FromModelAndSplits) {
  data::Dataset d;
  d.features = Matrix(4, 1);
  d.features << 1, 2, -1, -2;
  d.labels = {0, 0, 0, 1};
  d.num_classes = 2;
  d.splits["train"] = {0, 1};
  d.splits["test"] = {2, 3};
  nn::NetworkModel m = nn::BuildModel({{1, 2, nn::Activation::kSoftmax}}, 0);
  m.weights[0] << 1, -1;
  m.biases[0].setZero();
  const AccuracyGap g = ComputeAccuracyGap(m, d);
  EXPECT_EQ(g.train_accuracy, 1.0);
  EXPECT_EQ(g.test_accuracy, 0.5);
  EXPECT_EQ(g.gap, 0.5);
}

TEST(CorrectnessIdentity, PaperRows) {
  // Texas100 rows: gap 30.4 -> 65.2 and gap 19.6 -> 59.8.
  EXPECT_NEAR(PredictedCorrectnessAccuracy(0.304), 0.652, 1e-15);
  EXPECT_NEAR(0.5 * 19.6 + 50.0, 59.8, 1e-12);
  EXPECT_NEAR(PredictedCorrectnessAccuracy(0.196), 0.598, 1e-15);
  EXPECT_EQ(PredictedCorrectnessAccuracy(0.0), 0.5);
  EXPECT_NEAR(CorrectnessIdentityResidual(0.7, 0.4), 0.0, 1e-15);
  EXPECT_NEAR(CorrectnessIdentityResidual(0.8, 0.4), 0.1, 1e-15);
}

TEST(CorrectnessIdentity, DirectCountOracle) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution member_ok(0.83), nonmember_ok(0.41);
  std::vector<ScoreRecord> mem, non;
  int mc = 0, nc = 0;
  for (int i = 0; i < 100; ++i) {
    const bool a = member_ok(rng), b = nonmember_ok(rng);
    mc += a;
    nc += b;
    mem.push_back(Rec({0.6, 0.4}, a ? 0 : 1, true));
    non.push_back(Rec({0.6, 0.4}, b ? 0 : 1, false));
  }
  const AccuracyGap g = ComputeAccuracyGap(mem, non);
  EXPECT_EQ(g.gap, (mc - nc) / 100.0);
  const double corr = attacks::CorrectnessAttackAccuracy(Concat(mem, non));
  EXPECT_LT(CorrectnessIdentityResidual(corr, g.gap), 1e-12);
}

TEST(ScoreVariance, Examples) {
  EXPECT_EQ(RecordScoreVariance(MakeRecord(0, Vector::Constant(10, 0.1), 0, true)), 0.0);
  EXPECT_EQ(RecordScoreVariance(Rec({1, 0}, 0, true)), 0.25);
  const ScoreVariance v = ComputeScoreVariance(
      {Rec({1, 0}, 0, true), Rec({0.5, 0.5}, 0, true), Rec({0, 1}, 0, false)});
  EXPECT_EQ(v.members, 0.125);
  EXPECT_EQ(v.nonmembers, 0.25);
  EXPECT_EQ(v.num_members, 2u);
  EXPECT_EQ(v.num_nonmembers, 1u);
  EXPECT_EQ(ComputeScoreVariance({Rec({1, 0}, 0, true)}).nonmembers, 0.0);
}

TEST(LossDistribution, Examples) {
  const LossDistribution d =
      ComputeLossDistribution({Rec({0, 1, 0}, 1, true),
                               MakeRecord(1, Vector::Constant(10, 0.1), 3, true)});
  EXPECT_EQ(d.losses[0], 0.0);
  EXPECT_NEAR(d.losses[1], 2.302585092994046, 1e-12);
  EXPECT_EQ(d.summary.min, 0.0);
  EXPECT_NEAR(d.summary.max, std::log(10.0), 1e-12);
  EXPECT_NEAR(d.summary.mean, 0.5 * std::log(10.0), 1e-12);
  EXPECT_THROW(ComputeLossDistribution({}), Error);
}

TEST(LossDistribution, DecilesInterpolate) {
  std::vector<ScoreRecord> rs;
  // Losses 0, 1, ..., 10 via F(x)_y = exp(-i).
  for (int i = 0; i <= 10; ++i) {
    const double p = std::exp(-static_cast<double>(i));
    rs.push_back(Rec({p, 1.0 - p}, 0, true));
  }
  const LossSummary s = ComputeLossDistribution(rs).summary;
  ASSERT_EQ(s.deciles.size(), 9u);
  for (int q = 1; q <= 9; ++q) EXPECT_NEAR(s.deciles[q - 1], q, 1e-9);
  rs.pop_back();  // losses 0..9: 10th percentile at 0.9
  EXPECT_NEAR(ComputeLossDistribution(rs).summary.deciles[0], 0.9, 1e-9);
}

TEST(Histogram, TwoValuesTwoBins) {
  const Histogram h = BuildHistogram({0.0, 1.0}, 2, 0.0, 1.0);
  EXPECT_EQ(h.counts, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(h.total, 2);
  EXPECT_EQ(h.bin_edges, (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Histogram, InteriorEdgeGoesRight) {
  EXPECT_EQ(BuildHistogram({0.5}, 2, 0.0, 1.0).counts, (std::vector<std::int64_t>{0, 1}));
  const Histogram h = BuildHistogram({0.3, 0.6, 0.9}, 10, 0.0, 0.9);
  EXPECT_EQ(h.counts[3], 1);
  EXPECT_EQ(h.counts[6], 1);
  EXPECT_EQ(h.counts[9], 1);
}

TEST(Histogram, AllEqualValues) {
  const std::vector<double> v = {2.5, 2.5, 2.5};
  const auto [lo, hi] = SharedRange(v, v);
  EXPECT_EQ(lo, 2.5);
  EXPECT_EQ(hi, 3.5);
  const Histogram h = BuildHistogram(v, 100, lo, hi);
  int nonzero = 0;
  for (auto c : h.counts) nonzero += c > 0;
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(h.total, 3);
}

TEST(Histogram, SharedRangeSpansBothSamples) {
  const auto [lo, hi] = SharedRange({1.0, 3.0}, {-2.0, 2.0});
  EXPECT_EQ(lo, -2.0);
  EXPECT_EQ(hi, 3.0);
}

TEST(Histogram, Errors) {
  EXPECT_THROW(BuildHistogram({0.5}, 0, 0.0, 1.0), Error);
  EXPECT_THROW(BuildHistogram({}, 2, 0.0, 1.0), Error);
  EXPECT_THROW(BuildHistogram({1.5}, 2, 0.0, 1.0), Error);
  EXPECT_THROW(BuildHistogram({std::nan("")}, 2, 0.0, 1.0), Error);
  EXPECT_THROW(HistogramFromCounts({0, 1}, {1, 2}), Error);
  EXPECT_THROW(HistogramFromCounts({0, 1, 1}, {1, 2}), Error);
  EXPECT_THROW(HistogramFromCounts({0, 1}, {-1}), Error);
}

TEST(Distance, HandExamples) {
  const Histogram p = HistogramFromCounts({0, 1, 2}, {2, 2});
  const Histogram q = HistogramFromCounts({0, 1, 2}, {1, 3});
  const DistanceReport r = CompareHistograms(p, q);
  EXPECT_NEAR(r.tv, 0.25, 1e-12);
  EXPECT_NEAR(r.kl, 0.5 * std::log(2.0) - 0.5 * std::log(1.5), 1e-12);
  EXPECT_NEAR(r.kl, 0.143841, 1e-6);
  EXPECT_NEAR(r.euclidean, std::sqrt(2.0), 1e-15);
}

TEST(Distance, IdenticalIsZero) {
  const Histogram p = HistogramFromCounts({0, 1, 2, 3}, {4, 0, 7});
  const DistanceReport r = CompareHistograms(p, p);
  EXPECT_EQ(r.tv, 0.0);
  EXPECT_EQ(r.kl, 0.0);
  EXPECT_EQ(r.euclidean, 0.0);
}

TEST(Distance, EmptyBinsKeepKlFinite) {
  const Histogram p = HistogramFromCounts({0, 1, 2}, {5, 0});
  const Histogram q = HistogramFromCounts({0, 1, 2}, {0, 5});
  const DistanceReport r = CompareHistograms(p, q);
  EXPECT_TRUE(std::isfinite(r.kl));
  EXPECT_GT(r.kl, 20.0);
  EXPECT_EQ(r.tv, 1.0);
}

TEST(Distance, MismatchedEdges) {
  EXPECT_THROW(CompareHistograms(HistogramFromCounts({0, 1, 2}, {1, 1}),
                                 HistogramFromCounts({0, 1, 3}, {1, 1})),
               Error);
  EXPECT_THROW(CompareHistograms(HistogramFromCounts({0, 1, 2}, {1, 1}),
                                 HistogramFromCounts({0, 2}, {2})),
               Error);
}

TEST(Distance, SymmetryAndRange) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> edges = {0, 1, 2, 3, 4, 5};
    std::vector<std::int64_t> a(5), b(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = count(rng);
      b[i] = count(rng);
    }
    a[0] += 1;
    b[1] += 1;
    const Histogram p = HistogramFromCounts(edges, a);
    const Histogram q = HistogramFromCounts(edges, b);
    const DistanceReport pq = CompareHistograms(p, q);
    const DistanceReport qp = CompareHistograms(q, p);
    EXPECT_NEAR(pq.tv, qp.tv, 1e-15);
    EXPECT_EQ(pq.euclidean, qp.euclidean);
    EXPECT_GE(pq.tv, 0.0);
    EXPECT_LE(pq.tv, 1.0);
    EXPECT_GE(pq.kl, 0.0);
    EXPECT_EQ(CompareHistograms(p, p).kl, 0.0);
  }
}

}  // namespace
}  // namespace neuguard::eval
