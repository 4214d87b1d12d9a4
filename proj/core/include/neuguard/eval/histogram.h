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


#ifndef NEUGUARD_EVAL_HISTOGRAM_H_
#define NEUGUARD_EVAL_HISTOGRAM_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace neuguard::eval {

struct Histogram {
  std::vector<double> bin_edges;      // num_bins + 1, strictly ascending
  std::vector<std::int64_t> counts;   // num_bins
  std::int64_t total = 0;

  int num_bins() const { return static_cast<int>(counts.size()); }
  // counts / total; all zeros when empty.
  std::vector<double> Normalized() const;
};

inline constexpr int kDefaultBins = 100;

// [min, max] over both samples. A degenerate range [v, v] widens to
// [v, v + 1] so that bins have positive width.
std::pair<double, double> SharedRange(const std::vector<double>& a,
                                      const std::vector<double>& b);

// Equal-width bins over [lo, hi]. A value on an interior edge goes to the
// bin on its right; the last bin is closed. Throws Error for num_bins < 1,
// an empty value set, a non-finite value or one outside [lo, hi].
Histogram BuildHistogram(const std::vector<double>& values, int num_bins,
                         double lo, double hi);

// Histogram with explicit edges and counts, validated.
Histogram HistogramFromCounts(std::vector<double> bin_edges,
                              std::vector<std::int64_t> counts);

struct DistanceReport {
  double euclidean = 0.0;  // over raw counts
  double kl = 0.0;         // KL(P || Q)
  double tv = 0.0;
};

// TV and KL use the normalized counts. When either distribution has an
// empty bin, KL adds 1e-10 to every bin of both and renormalizes first.
// Throws Error on mismatched edges.
DistanceReport CompareHistograms(const Histogram& p, const Histogram& q);

inline constexpr double kKlSmoothing = 1e-10;

}  // namespace neuguard::eval

#endif  // NEUGUARD_EVAL_HISTOGRAM_H_
