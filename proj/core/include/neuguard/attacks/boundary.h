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

#ifndef NEUGUARD_ATTACKS_BOUNDARY_H_
#define NEUGUARD_ATTACKS_BOUNDARY_H_

#include <cstdint>
#include <vector>

#include "neuguard/attacks/metric_attacks.h"
#include "neuguard/attacks/score_record.h"
#include "neuguard/data/dataset.h"
#include "neuguard/nn/forward.h"
#include "neuguard/nn/model.h"

namespace neuguard::attacks {

struct BoundaryConfig {
  int max_steps = 200;
  double initial_step = 0.01;
  // Step length multiplier after each non-flipping step.
  double step_growth = 1.25;
  double max_radius = 100.0;
  int bisection_steps = 20;
  std::uint64_t seed = 0;
};

struct BoundaryResult {
  double distance = 0.0;
  bool converged = true;
  int steps = 0;
};

// Estimates the smallest L2 perturbation that changes the predicted label
// away from `label`: normalized-gradient ascent on the margin
// (max other logit - true logit) with growing steps until the label flips,
// then bisection along the final perturbation direction. Returns 0 for an
// already misclassified input and max_radius (converged = false) when no
// flip is found within the budget.
BoundaryResult BoundaryDistance(const nn::NetworkModel& model,
                                const Vector& x, int label,
                                const BoundaryConfig& config,
                                const nn::HiddenScaler* scaler = nullptr);

// Fills boundary_distance for each record, reading inputs from the dataset
// rows named by sample_id. Parallel over records (NG_THREADS caps it);
// results do not depend on the thread count.
void AttachBoundaryDistances(std::vector<ScoreRecord>& records,
                             const nn::NetworkModel& model,
                             const data::Dataset& dataset,
                             const BoundaryConfig& config,
                             const nn::HiddenScaler* scaler = nullptr);

struct LabelOnlyResult {
  double accuracy = 0.0;
  double threshold = 0.0;
};

// Global MemberIfGE threshold on the known records' distances, balanced
// accuracy on the eval records.
LabelOnlyResult LabelOnlyAttack(const std::vector<ScoreRecord>& eval,
                                const std::vector<ScoreRecord>& known);

}  // namespace neuguard::attacks

#endif  // NEUGUARD_ATTACKS_BOUNDARY_H_
