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


// Independent reference computations shared by the property and acceptance
// tests.

#ifndef NEUGUARD_TESTS_ORACLES_H_
#define NEUGUARD_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "neuguard/attacks/boundary.h"
#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/nn/backward.h"
#include "neuguard/nn/model.h"
#include "neuguard/reg/class_mean_tracker.h"
#include "neuguard/reg/regularizers.h"

namespace neuguard::oracles {

using LD = long double;

// Composite loss in long double: mean cross-entropy, alpha times the
// balanced-output term of every hidden layer and beta times the mean
// squared distance of the scores to fixed targets. Tanh hidden layers,
// Softmax output.
inline LD ReferenceLoss(const nn::NetworkModel& m, const Matrix& x,
                        const std::vector<int>& y, double alpha, double beta,
                        const Matrix& targets) {
  const int n = static_cast<int>(x.rows());
  LD ce = 0, boc = 0, var = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<LD> a(x.cols());
    for (int j = 0; j < x.cols(); ++j) a[j] = x(i, j);
    for (int l = 0; l < m.num_layers(); ++l) {
      const Matrix& w = m.weights[l];
      std::vector<LD> z(w.rows());
      for (int o = 0; o < w.rows(); ++o) {
        LD s = m.biases[l][o];
        for (int c = 0; c < w.cols(); ++c) s += static_cast<LD>(w(o, c)) * a[c];
        z[o] = s;
      }
      if (l + 1 < m.num_layers()) {
        for (LD& v : z) v = std::tanh(v);
        const std::size_t half = z.size() / 2;
        LD g = 0;
        for (std::size_t u = 0; u < z.size(); ++u) g += u < half ? z[u] : -z[u];
        if (z.size() >= 2) boc += g * g / static_cast<LD>(z.size());
      } else {
        const LD mx = *std::max_element(z.begin(), z.end());
        LD sum = 0;
        for (LD& v : z) sum += (v = std::exp(v - mx));
        for (LD& v : z) v /= sum;
        ce -= std::log(z[y[i]]);
        for (std::size_t c = 0; c < z.size(); ++c) {
          const LD d = z[c] - targets(i, static_cast<Eigen::Index>(c));
          var += d * d;
        }
      }
      a = std::move(z);
    }
  }
  return ce / n + alpha * boc + beta * var / n;
}

struct GradientCheck {
  double max_relative_error = 0.0;  // |analytic - fd| / max(1, |fd|)
  double loss_error = 0.0;
  int num_parameters = 0;
};

// One random Tanh/Softmax net with alpha in [0, 10] and beta in [0, 100];
// the variance targets are fixed, as the class means are stop-gradient.
inline GradientCheck CheckNeuGuardGradient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> width(2, 7), depth(1, 3), classes(2, 4);
  std::uniform_real_distribution<double> alpha_d(0.0, 10.0), beta_d(0.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g;
  const int d = width(rng), k = classes(rng), n = 5;
  std::vector<int> widths = {d};
  for (int h = depth(rng); h > 0; --h) widths.push_back(width(rng));
  widths.push_back(k);
  const nn::NetworkModel m = nn::BuildModel(
      nn::MakeChain(widths, nn::Activation::kTanh, nn::Activation::kSoftmax), rng());
  Matrix x(n, d);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng() % k);
  const double alpha = alpha_d(rng), beta = beta_d(rng);
  Matrix targets(n, k);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) targets(i, c) = unit(rng);
    targets.row(i) /= targets.row(i).sum();
  }

  const reg::BalancedOutputTerm boc(alpha);
  const reg::VarianceTerm var(beta, targets);
  nn::LossSpec spec;
  spec.labels = y;
  spec.auxiliary = {&boc, &var};
  const nn::BackwardResult br = nn::Backward(m, x, spec);

  GradientCheck out;
  out.loss_error = std::abs(
      br.loss.total - static_cast<double>(ReferenceLoss(m, x, y, alpha, beta, targets)));
  nn::NetworkModel p = m;
  const LD h = 1e-6L;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    // The perturbed parameter is a double; divide by the realized step.
    param = static_cast<double>(saved + h);
    const LD up_step = static_cast<LD>(param) - saved;
    const LD up = ReferenceLoss(p, x, y, alpha, beta, targets);
    param = static_cast<double>(saved - h);
    const LD down_step = saved - static_cast<LD>(param);
    const LD down = ReferenceLoss(p, x, y, alpha, beta, targets);
    param = saved;
    const double fd = static_cast<double>((up - down) / (up_step + down_step));
    out.max_relative_error = std::max(
        out.max_relative_error, std::abs(analytic - fd) / std::max(1.0, std::abs(fd)));
    ++out.num_parameters;
  };
  for (int l = 0; l < m.num_layers(); ++l) {
    for (int e = 0; e < m.weights[l].size(); ++e) {
      check(p.weights[l].data()[e], br.gradients.weights[l].data()[e]);
    }
    for (int e = 0; e < m.biases[l].size(); ++e) check(p.biases[l][e], br.gradients.biases[l][e]);
  }
  return out;
}

// Largest deviation between the tracker and per-class means summed from
// scratch in long double, over `updates` random batches. Class k-1 never
// appears and must stay empty (a nonzero count returns +inf).
inline double TrackerMaxError(std::uint64_t seed, int updates, int k = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  reg::ClassMeanTracker t(k);
  std::vector<std::vector<LD>> sum(k, std::vector<LD>(k, 0));
  std::vector<int> count(k, 0);
  for (int step = 0; step < updates; ++step) {
    const int b = 1 + static_cast<int>(rng() % 4);
    Matrix s(b, k);
    std::vector<int> y(b);
    for (int i = 0; i < b; ++i) {
      for (int c = 0; c < k; ++c) s(i, c) = u(rng);
      s.row(i) /= s.row(i).sum();
      y[i] = static_cast<int>(rng() % (k - 1));
      ++count[y[i]];
      for (int c = 0; c < k; ++c) sum[y[i]][c] += s(i, c);
    }
    t.Update(s, y);
  }
  double err = 0.0;
  for (int c = 0; c < k; ++c) {
    if (t.count(c) != count[c]) return std::numeric_limits<double>::infinity();
    for (int j = 0; j < k && count[c] > 0; ++j) {
      err = std::max(err, std::abs(t.mean(c)[j] - static_cast<double>(sum[c][j] / count[c])));
    }
  }
  return err;
}

inline double BruteBalanced(const std::vector<double>& mem, const std::vector<double>& non,
                            double tau, attacks::Direction dir) {
  auto frac = [&](const std::vector<double>& v, bool want) {
    int hit = 0;
    for (double x : v) hit += attacks::PredictMember(x, tau, dir) == want;
    return static_cast<double>(hit) / static_cast<double>(v.size());
  };
  return 0.5 * frac(mem, true) + 0.5 * frac(non, false);
}

// Best balanced accuracy over every threshold that can change a decision:
// the sentinels, each observed value and each midpoint.
inline double ExhaustiveBest(const std::vector<double>& mem, const std::vector<double>& non,
                             attacks::Direction dir) {
  std::vector<double> all = mem;
  all.insert(all.end(), non.begin(), non.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> cand = {-std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < all.size(); ++i) {
    cand.push_back(all[i]);
    if (i + 1 < all.size()) cand.push_back(all[i] + (all[i + 1] - all[i]) / 2);
  }
  double best = 0.0;
  for (double c : cand) best = std::max(best, BruteBalanced(mem, non, c, dir));
  return best;
}

// Random small calibration set over 3 classes with coarse, tie-heavy
// confidence values. Returns true when every class threshold reaches the
// exhaustive optimum and reports that accuracy, up to rounding.
inline bool ClassThresholdsAreOptimal(std::mt19937_64& rng) {
  std::vector<attacks::ScoreRecord> known;
  const int n = 6 + static_cast<int>(rng() % 30);
  for (int i = 0; i < n; ++i) {
    Vector s(3);
    for (int c = 0; c < 3; ++c) s[c] = 1.0 + static_cast<double>(rng() % 4);
    s /= s.sum();
    known.push_back(attacks::MakeRecord(i, s, static_cast<int>(rng() % 3), rng() % 2 == 0));
  }
  const auto dir = rng() % 2 ? attacks::Direction::kMemberIfGE : attacks::Direction::kMemberIfLE;
  const auto t =
      attacks::SelectClassThresholds(known, attacks::MetricKind::kConfidence, dir);
  for (const auto& [label, tau] : t.per_class) {
    std::vector<double> mem, non;
    for (const auto& r : known) {
      if (r.true_label == label) (r.is_member ? mem : non).push_back(attacks::MetricConfidence(r));
    }
    if (mem.empty() || non.empty()) continue;
    const double best = ExhaustiveBest(mem, non, dir);
    // Both sides compute the same fractions in different orders.
    if (std::abs(BruteBalanced(mem, non, tau, dir) - best) > 1e-12) return false;
    if (std::abs(t.calibration_accuracy.at(label) - best) > 1e-12) return false;
  }
  return true;
}

// Random 3-D linear two-class model and input; returns the relative error
// of the boundary search against |w.x + b| / ||w||, or +inf when the search
// did not converge. Inputs too close to the boundary are redrawn.
inline double LinearBoundaryRelativeError(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  nn::NetworkModel m = nn::BuildModel({{3, 2, nn::Activation::kSoftmax}}, rng());
  for (int i = 0; i < m.weights[0].size(); ++i) m.weights[0].data()[i] = g(rng);
  for (int i = 0; i < 2; ++i) m.biases[0][i] = 0.5 * g(rng);
  const Vector w = (m.weights[0].row(0) - m.weights[0].row(1)).transpose();
  const double b = m.biases[0][0] - m.biases[0][1];
  Vector x(3);
  double expected = 0.0;
  do {
    for (int i = 0; i < 3; ++i) x[i] = 2.0 * g(rng);
    expected = std::abs(w.dot(x) + b) / w.norm();
  } while (expected < 1e-3);
  attacks::BoundaryConfig c;
  c.seed = rng();
  const int y = w.dot(x) + b >= 0 ? 0 : 1;
  const attacks::BoundaryResult r = attacks::BoundaryDistance(m, x, y, c);
  if (!r.converged) return std::numeric_limits<double>::infinity();
  return std::abs(r.distance - expected) / expected;
}

}  // namespace neuguard::oracles

#endif  // NEUGUARD_TESTS_ORACLES_H_
