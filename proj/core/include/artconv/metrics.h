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

#ifndef ARTCONV_METRICS_H_
#define ARTCONV_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>

#include <nlohmann/json.hpp>

namespace artconv {

inline constexpr double kProbabilityClamp = 1e-7;

// Binary cross-entropy with the probability clamped to [1e-7, 1 - 1e-7].
double BceLoss(double probability, int label);

struct ConfusionCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;

  std::size_t total() const {
    return true_positive + false_positive + true_negative + false_negative;
  }
};

struct ClassMetrics {
  double precision = 0.0;  // 0 when nothing was predicted for the class
  double recall = 0.0;     // 0 when the class has no samples
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  ClassMetrics positive;  // label 1, same speaker
  ClassMetrics negative;  // label 0
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when only one class is present
  ConfusionCounts counts;
  double threshold = 0.5;
};

// Mann-Whitney form of ROC AUC: P(pos > neg) + P(pos == neg) / 2, computed
// from tie-averaged ranks. Throws DataError unless both classes are present.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

// Prediction is `score >= threshold`. Throws DataError on empty input or
// mismatched lengths.
MetricsReport ComputeMetrics(std::span<const double> scores,
                             std::span<const int> labels, double threshold = 0.5);

void to_json(nlohmann::json& j, const ConfusionCounts& c);
void to_json(nlohmann::json& j, const ClassMetrics& m);
void to_json(nlohmann::json& j, const MetricsReport& r);

}  // namespace artconv

#endif  // ARTCONV_METRICS_H_
