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


#include "neuguard/eval/histogram.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "neuguard/common.h"

namespace neuguard::eval {
namespace {

void ValidateHistogram(const Histogram& h) {
  if (h.counts.empty()) throw Error("histogram has no bins");
  if (h.bin_edges.size() != h.counts.size() + 1) {
    throw Error("histogram needs num_bins + 1 edges");
  }
  for (std::size_t i = 1; i < h.bin_edges.size(); ++i) {
    if (!(h.bin_edges[i] > h.bin_edges[i - 1])) {
      throw Error("histogram edges must be strictly ascending");
    }
  }
  std::int64_t total = 0;
  for (std::int64_t c : h.counts) {
    if (c < 0) throw Error("negative histogram count");
    total += c;
  }
  if (total != h.total) throw Error("histogram total does not match counts");
}

std::vector<double> Smoothed(std::vector<double> p) {
  double sum = 0.0;
  for (double& v : p) {
    v += kKlSmoothing;
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

std::vector<double> Histogram::Normalized() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return p;
}

std::pair<double, double> SharedRange(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  if (a.empty() && b.empty()) throw Error("range of empty samples");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* v : {&a, &b}) {
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error("non-finite sample value");
  if (lo == hi) hi = lo + 1.0;
  return {lo, hi};
}

Histogram BuildHistogram(const std::vector<double>& values, int num_bins,
                         double lo, double hi) {
  if (num_bins < 1) throw Error("histogram needs at least one bin");
  if (values.empty()) throw Error("histogram of an empty sample");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error("histogram range must be finite with hi > lo");
  }
  Histogram h;
  h.bin_edges.resize(static_cast<std::size_t>(num_bins) + 1);
  const double width = (hi - lo) / num_bins;
  for (int i = 0; i <= num_bins; ++i) h.bin_edges[i] = lo + width * i;
  h.bin_edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(num_bins), 0);
  for (double v : values) {
    if (!std::isfinite(v) || v < lo || v > hi) {
      throw Error("value " + std::to_string(v) + " outside histogram range");
    }
    int idx = std::clamp(static_cast<int>(std::floor((v - lo) / width)), 0,
                         num_bins - 1);
    // Settle the index against the stored edges.
    while (idx + 1 < num_bins && v >= h.bin_edges[idx + 1]) ++idx;
    while (idx > 0 && v < h.bin_edges[idx]) --idx;
    ++h.counts[idx];
  }
  h.total = static_cast<std::int64_t>(values.size());
  return h;
}

Histogram HistogramFromCounts(std::vector<double> bin_edges,
                              std::vector<std::int64_t> counts) {
  Histogram h;
  h.bin_edges = std::move(bin_edges);
  h.counts = std::move(counts);
  for (std::int64_t c : h.counts) h.total += c;
  ValidateHistogram(h);
  return h;
}

DistanceReport CompareHistograms(const Histogram& p, const Histogram& q) {
  ValidateHistogram(p);
  ValidateHistogram(q);
  if (p.bin_edges != q.bin_edges) throw Error("histograms have different bin edges");
  if (p.total == 0 || q.total == 0) throw Error("cannot compare an empty histogram");
  DistanceReport r;
  double sq = 0.0;
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    const double d = static_cast<double>(p.counts[i] - q.counts[i]);
    sq += d * d;
  }
  r.euclidean = std::sqrt(sq);

  std::vector<double> pn = p.Normalized(), qn = q.Normalized();
  for (std::size_t i = 0; i < pn.size(); ++i) r.tv += std::abs(pn[i] - qn[i]);
  r.tv *= 0.5;

  const bool has_zero =
      std::find(pn.begin(), pn.end(), 0.0) != pn.end() ||
      std::find(qn.begin(), qn.end(), 0.0) != qn.end();
  if (has_zero) {
    pn = Smoothed(std::move(pn));
    qn = Smoothed(std::move(qn));
  }
  for (std::size_t i = 0; i < pn.size(); ++i) {
    if (pn[i] > 0.0) r.kl += pn[i] * std::log(pn[i] / qn[i]);
  }
  r.kl = std::max(r.kl, 0.0);
  return r;
}

}  // namespace neuguard::eval
