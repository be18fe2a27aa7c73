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

#ifndef ARTCONV_ANALYSIS_H_
#define ARTCONV_ANALYSIS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artconv/corpus.h"
#include "artconv/feature_store.h"
#include "artconv/net.h"

namespace artconv {

enum class Relation {
  kIntraDyad,           // label 0: the two members of a dyad
  kIntraSpeaker,        // label 1 within one condition
  kIntraSpeakerVsSolo,  // label 1 against the speaker's solo reading
};

std::string_view ToString(Relation relation);
Relation RelationOf(const PairExample& pair);

struct ScoredPair {
  PairExample pair;
  double similarity = 0.0;
  int predicted_label = 0;
  bool correct = false;

  Relation relation() const { return RelationOf(pair); }
};

// Attaches predictions to precomputed similarities.
std::vector<ScoredPair> MakeScored(std::span<const PairExample> pairs,
                                   std::span<const double> similarities,
                                   double threshold = 0.5);

// Inference-mode scoring of every pair. Throws DataError on missing features.
std::vector<ScoredPair> ScoreExamples(const ModelParams& params,
                                      std::span<const PairExample> pairs,
                                      const FeatureStore& features,
                                      double threshold = 0.5);

// Drops misclassified pairs, then values outside the 1.5 IQR fence of
// their (condition, relation) group. Quartiles interpolate linearly
// between order statistics. Input order is preserved.
std::vector<ScoredPair> FilterScores(std::span<const ScoredPair> scored);

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
};

// Throws DataError when no pair matches.
Summary ConditionSummary(std::span<const ScoredPair> scored, Condition condition,
                         Relation relation);

// mean(solo intra-speaker) - mean(imitation pairs of `comparison` kind),
// both restricted to `speaker`.
double ImitationAbility(std::span<const ScoredPair> solo,
                        std::span<const ScoredPair> imitation,
                        const std::string& speaker,
                        Relation comparison = Relation::kIntraSpeakerVsSolo);

// mean(interactive intra-dyad) - mean(solo intra-dyad) over pairs that
// involve `speaker`.
double ConvergenceDegree(std::span<const ScoredPair> solo,
                         std::span<const ScoredPair> interactive,
                         const std::string& speaker);

// (v - min) / (max - min). Throws DataError when all values are equal.
std::vector<double> MinMaxNormalize(std::span<const double> values);

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-tailed
  std::size_t n = 0;
};

// Sample Pearson r with p from Student's t on n - 2 degrees of freedom.
// Throws DataError for n < 3, mismatched lengths or constant input.
Correlation Pearson(std::span<const double> x, std::span<const double> y);

struct SpeakerScores {
  std::string speaker;
  double imitation_ability = 0.0;
  double convergence_degree = 0.0;
  std::optional<double> imitation_ability_norm;
  std::optional<double> convergence_degree_norm;
};

struct ConvergenceReport {
  // condition -> relation -> summary, for every group with data.
  std::map<Condition, std::map<Relation, Summary>> summaries;
  std::map<Condition, std::map<Relation, Summary>> unfiltered_summaries;
  std::vector<SpeakerScores> speakers;
  std::vector<std::string> skipped_speakers;
  std::optional<Correlation> correlation;
  std::size_t pairs_scored = 0;
  std::vector<ScoredPair> kept;  // pairs surviving FilterScores
};

ConvergenceReport BuildReport(std::span<const ScoredPair> scored,
                              std::span<const std::string> speakers);

// Writes report.json, similarity_distributions.csv and speaker_scores.csv.
void EmitReport(const ConvergenceReport& report, const std::filesystem::path& out_dir);

void to_json(nlohmann::json& j, const Summary& s);
void to_json(nlohmann::json& j, const Correlation& c);
void to_json(nlohmann::json& j, const SpeakerScores& s);
void to_json(nlohmann::json& j, const ConvergenceReport& r);

}  // namespace artconv

#endif  // ARTCONV_ANALYSIS_H_
