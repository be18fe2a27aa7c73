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

#ifndef ARTCONV_TESTS_ORACLES_METRICS_ORACLE_H_
#define ARTCONV_TESTS_ORACLES_METRICS_ORACLE_H_

#include <cstddef>
#include <vector>

namespace artconv::oracle {

// P(pos > neg) + P(pos == neg) / 2 over every (positive, negative) pair.
inline double BruteForceAuc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double wins = 0.0;
  std::size_t comparisons = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++comparisons;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(comparisons);
}

struct BruteMetrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision_pos = 0.0, recall_pos = 0.0, f1_pos = 0.0;
  double precision_neg = 0.0, recall_neg = 0.0, f1_neg = 0.0;
};

inline double SafeRatio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Harmonic mean of precision tp/(tp+fp) and recall tp/(tp+fn), reduced over
// the counts so the value is rounded by a single division.
inline double F1(std::size_t tp, std::size_t fp, std::size_t fn) {
  return SafeRatio(2 * tp, 2 * tp + fp + fn);
}

inline BruteMetrics BruteForceMetrics(const std::vector<double>& scores,
                                      const std::vector<int>& labels, double threshold) {
  BruteMetrics m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      predicted ? ++m.tp : ++m.fn;
    } else {
      predicted ? ++m.fp : ++m.tn;
    }
  }
  m.accuracy = SafeRatio(m.tp + m.tn, scores.size());
  m.precision_pos = SafeRatio(m.tp, m.tp + m.fp);
  m.recall_pos = SafeRatio(m.tp, m.tp + m.fn);
  m.f1_pos = F1(m.tp, m.fp, m.fn);
  m.precision_neg = SafeRatio(m.tn, m.tn + m.fn);
  m.recall_neg = SafeRatio(m.tn, m.tn + m.fp);
  m.f1_neg = F1(m.tn, m.fn, m.fp);
  return m;
}

}  // namespace artconv::oracle

#endif  // ARTCONV_TESTS_ORACLES_METRICS_ORACLE_H_
