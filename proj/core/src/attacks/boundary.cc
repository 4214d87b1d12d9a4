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


#include "neuguard/attacks/boundary.h"

#include <cmath>
#include <random>

#include "neuguard/nn/backward.h"
#include "util/parallel.h"

namespace neuguard::attacks {
namespace {

int PredictedLabel(const nn::NetworkModel& model, const Vector& x,
                   const nn::HiddenScaler* scaler) {
  const Matrix out = nn::Predict(model, x.transpose(), scaler);
  return nn::ArgMax(out.row(0));
}

// Gradient of max_{j != y} z_j - z_y with respect to the input.
Vector MarginGradient(const nn::NetworkModel& model, const Vector& x, int label,
                      const nn::HiddenScaler* scaler) {
  const nn::ForwardTrace trace = nn::ForwardWithTrace(model, x.transpose(), scaler);
  const auto z = trace.logits().row(0);
  int best = -1;
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    if (j == label) continue;
    if (best < 0 || z[j] > z[best]) best = static_cast<int>(j);
  }
  Matrix d = Matrix::Zero(1, z.size());
  d(0, best) += 1.0;
  d(0, label) -= 1.0;
  const nn::BackwardResult r =
      nn::BackpropagateLogits(model, trace, d, {}, /*want_input_gradient=*/true);
  return r.input_gradient.row(0).transpose();
}

}  // namespace

BoundaryResult BoundaryDistance(const nn::NetworkModel& model, const Vector& x,
                                int label, const BoundaryConfig& config,
                                const nn::HiddenScaler* scaler) {
  if (label < 0 || label >= model.output_width()) {
    throw Error("label " + std::to_string(label) + " out of range");
  }
  if (model.output_width() < 2) throw Error("boundary distance needs >= 2 classes");
  if (config.max_steps < 0 || config.initial_step <= 0.0 ||
      config.step_growth < 1.0 || config.max_radius <= 0.0 ||
      config.bisection_steps < 0) {
    throw ConfigError("invalid boundary search configuration");
  }
  BoundaryResult result;
  if (PredictedLabel(model, x, scaler) != label) {
    result.distance = 0.0;
    return result;
  }
  Vector delta = Vector::Zero(x.size());
  double step = config.initial_step;
  bool flipped = false;
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  for (int it = 0; it < config.max_steps && !flipped; ++it) {
    Vector g = MarginGradient(model, x + delta, label, scaler);
    double norm = g.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(rng);
      norm = g.norm();
    }
    delta += (step / norm) * g;
    const double radius = delta.norm();
    if (radius > config.max_radius) delta *= config.max_radius / radius;
    result.steps = it + 1;
    flipped = PredictedLabel(model, x + delta, scaler) != label;
    step *= config.step_growth;
  }
  if (!flipped) {
    result.distance = config.max_radius;
    result.converged = false;
    return result;
  }
  const double radius = delta.norm();
  const Vector direction = delta / radius;
  double lo = 0.0, hi = radius;
  for (int i = 0; i < config.bisection_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (PredictedLabel(model, x + mid * direction, scaler) != label) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.distance = hi;
  return result;
}

void AttachBoundaryDistances(std::vector<ScoreRecord>& records,
                             const nn::NetworkModel& model,
                             const data::Dataset& dataset,
                             const BoundaryConfig& config,
                             const nn::HiddenScaler* scaler) {
  for (const auto& r : records) {
    if (r.sample_id < 0 || static_cast<std::size_t>(r.sample_id) >= dataset.size()) {
      throw Error("record sample_id " + std::to_string(r.sample_id) +
                  " outside the dataset");
    }
  }
  util::ParallelFor(records.size(), [&](std::size_t i) {
    ScoreRecord& r = records[i];
    BoundaryConfig c = config;
    c.seed = MixSeed(config.seed, static_cast<std::uint64_t>(r.sample_id));
    const Vector x = dataset.features.row(r.sample_id).transpose();
    r.boundary_distance = BoundaryDistance(model, x, r.true_label, c, scaler).distance;
  });
}

LabelOnlyResult LabelOnlyAttack(const std::vector<ScoreRecord>& eval,
                                const std::vector<ScoreRecord>& known) {
  const ThresholdSet set = SelectGlobalThreshold(known, MetricKind::kBoundaryDistance,
                                                 Direction::kMemberIfGE);
  LabelOnlyResult result;
  result.threshold = set.global;
  result.accuracy = MetricAttackAccuracy(eval, set);
  return result;
}

}  // namespace neuguard::attacks
