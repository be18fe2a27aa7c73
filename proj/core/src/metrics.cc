// Copyright 2026 The artconv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "artconv/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "artconv/error.h"

namespace artconv {

double BceLoss(double probability, int label) {
  const double p = std::clamp(probability, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return label == 1 ? -std::log(p) : -std::log1p(-p);
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("roc_auc: length mismatch");
  for (double s : scores) {
    if (!std::isfinite(s)) throw DataError("roc_auc: non-finite score");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Doubled rank sum of positives, an integer.
  double twice_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double twice_avg_rank = static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        twice_rank_sum += twice_avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("roc_auc needs at least one positive and one negative");
  }
  const double np = static_cast<double>(positives);
  const double twice_u = twice_rank_sum - np * (np + 1.0);
  return twice_u / (2.0 * np * static_cast<double>(negatives));
}

namespace {

ClassMetrics ForClass(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  m.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = 2 * tp + fp + fn > 0
             ? 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn)
             : 0.0;
  return m;
}

}  // namespace

MetricsReport ComputeMetrics(std::span<const double> scores,
                             std::span<const int> labels, double threshold) {
  if (scores.empty()) throw DataError("evaluate: empty pair set");
  if (scores.size() != labels.size()) throw DataError("evaluate: length mismatch");
  MetricsReport r;
  r.threshold = threshold;
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == 1;
    has_pos = has_pos || actual;
    has_neg = has_neg || !actual;
    if (predicted && actual) ++r.counts.true_positive;
    if (predicted && !actual) ++r.counts.false_positive;
    if (!predicted && !actual) ++r.counts.true_negative;
    if (!predicted && actual) ++r.counts.false_negative;
  }
  const ConfusionCounts& c = r.counts;
  r.positive = ForClass(c.true_positive, c.false_positive, c.false_negative);
  r.negative = ForClass(c.true_negative, c.false_negative, c.false_positive);
  r.accuracy = static_cast<double>(c.true_positive + c.true_negative) /
               static_cast<double>(c.total());
  if (has_pos && has_neg) r.auc = RocAuc(scores, labels);
  return r;
}

void to_json(nlohmann::json& j, const ConfusionCounts& c) {
  j = {{"true_positive", c.true_positive},
       {"false_positive", c.false_positive},
       {"true_negative", c.true_negative},
       {"false_negative", c.false_negative}};
}

void to_json(nlohmann::json& j, const ClassMetrics& m) {
  j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = {{"positive", r.positive},
       {"negative", r.negative},
       {"accuracy", r.accuracy},
       {"auc", r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr)},
       {"counts", r.counts},
       {"threshold", r.threshold}};
}

}  // namespace artconv
