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

#include "artconv/analysis.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <boost/math/special_functions/beta.hpp>

#include "artconv/error.h"
#include "artconv/train.h"

namespace artconv {

std::string_view ToString(Relation relation) {
  switch (relation) {
    case Relation::kIntraDyad: return "intra_dyad";
    case Relation::kIntraSpeaker: return "intra_speaker";
    case Relation::kIntraSpeakerVsSolo: return "intra_speaker_vs_solo";
  }
  return "unknown";
}

Relation RelationOf(const PairExample& pair) {
  if (pair.label == 0) return Relation::kIntraDyad;
  return pair.versus_solo ? Relation::kIntraSpeakerVsSolo : Relation::kIntraSpeaker;
}

std::vector<ScoredPair> MakeScored(std::span<const PairExample> pairs,
                                   std::span<const double> similarities, double threshold) {
  if (pairs.size() != similarities.size()) {
    throw DataError("score count does not match pair count");
  }
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ScoredPair s;
    s.pair = pairs[i];
    s.similarity = similarities[i];
    s.predicted_label = s.similarity >= threshold ? 1 : 0;
    s.correct = s.predicted_label == s.pair.label;
    out.push_back(s);
  }
  return out;
}

std::vector<ScoredPair> ScoreExamples(const ModelParams& params,
                                      std::span<const PairExample> pairs,
                                      const FeatureStore& features, double threshold) {
  if (pairs.empty()) return {};
  const std::vector<double> sims = ScorePairs(params, pairs, features);
  return MakeScored(pairs, sims, threshold);
}

namespace {

// Linear interpolation between order statistics of a sorted sample.
double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

using GroupKey = std::pair<Condition, Relation>;

GroupKey GroupOf(const ScoredPair& s) { return {s.pair.condition, s.relation()}; }

bool Involves(const PairExample& p, const std::string& speaker) {
  return p.left.speaker_id == speaker || p.right.speaker_id == speaker;
}

Summary Summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.n));
  return s;
}

double MeanWhere(std::span<const ScoredPair> scored, Condition condition,
                 Relation relation, const std::string& speaker) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const ScoredPair& s : scored) {
    if (s.pair.condition != condition || s.relation() != relation) continue;
    if (!Involves(s.pair, speaker)) continue;
    sum += s.similarity;
    ++n;
  }
  if (n == 0) {
    throw DataError("no " + std::string(ToString(relation)) + " pairs for speaker " +
                    speaker + " in the " + std::string(ToString(condition)) +
                    " condition");
  }
  return sum / static_cast<double>(n);
}

std::map<Condition, std::map<Relation, Summary>> SummarizeAll(
    std::span<const ScoredPair> scored) {
  std::map<GroupKey, std::vector<double>> groups;
  for (const ScoredPair& s : scored) groups[GroupOf(s)].push_back(s.similarity);
  std::map<Condition, std::map<Relation, Summary>> out;
  for (const auto& [key, values] : groups) out[key.first][key.second] = Summarize(values);
  return out;
}

std::string Number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<ScoredPair> FilterScores(std::span<const ScoredPair> scored) {
  std::map<GroupKey, std::vector<double>> groups;
  for (const ScoredPair& s : scored) {
    if (s.correct) groups[GroupOf(s)].push_back(s.similarity);
  }
  std::map<GroupKey, std::pair<double, double>> fences;
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    const double q1 = Quantile(values, 0.25);
    const double q3 = Quantile(values, 0.75);
    const double iqr = q3 - q1;
    fences[key] = {q1 - 1.5 * iqr, q3 + 1.5 * iqr};
  }
  std::vector<ScoredPair> out;
  for (const ScoredPair& s : scored) {
    if (!s.correct) continue;
    const auto& [lo, hi] = fences.at(GroupOf(s));
    if (s.similarity >= lo && s.similarity <= hi) out.push_back(s);
  }
  return out;
}

Summary ConditionSummary(std::span<const ScoredPair> scored, Condition condition,
                         Relation relation) {
  std::vector<double> values;
  for (const ScoredPair& s : scored) {
    if (s.pair.condition == condition && s.relation() == relation) {
      values.push_back(s.similarity);
    }
  }
  if (values.empty()) {
    throw DataError("no " + std::string(ToString(relation)) + " pairs in the " +
                    std::string(ToString(condition)) + " condition");
  }
  return Summarize(values);
}

double ImitationAbility(std::span<const ScoredPair> solo,
                        std::span<const ScoredPair> imitation, const std::string& speaker,
                        Relation comparison) {
  return MeanWhere(solo, Condition::kSolo, Relation::kIntraSpeaker, speaker) -
         MeanWhere(imitation, Condition::kImitation, comparison, speaker);
}

double ConvergenceDegree(std::span<const ScoredPair> solo,
                         std::span<const ScoredPair> interactive,
                         const std::string& speaker) {
  return MeanWhere(interactive, Condition::kInteractive, Relation::kIntraDyad, speaker) -
         MeanWhere(solo, Condition::kSolo, Relation::kIntraDyad, speaker);
}

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  if (values.empty()) throw DataError("min_max_normalize: empty input");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, range = *hi - *lo;
  if (!(range > 0.0)) throw DataError("min_max_normalize: all values are equal");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(std::clamp((v - min) / range, 0.0, 1.0));
  return out;
}

Correlation Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw DataError("pearson: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("pearson: constant input");
  Correlation c;
  c.n = n;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  const double one_minus_r2 = 1.0 - c.r * c.r;
  if (one_minus_r2 <= 0.0) {
    c.p = 0.0;
  } else {
    // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2) with t^2 = r^2 df / (1 - r^2).
    const double t2 = c.r * c.r * df / one_minus_r2;
    c.p = boost::math::ibeta(df / 2.0, 0.5, df / (df + t2));
  }
  return c;
}

ConvergenceReport BuildReport(std::span<const ScoredPair> scored,
                              std::span<const std::string> speakers) {
  ConvergenceReport report;
  report.pairs_scored = scored.size();
  report.kept = FilterScores(scored);
  report.summaries = SummarizeAll(report.kept);
  report.unfiltered_summaries = SummarizeAll(scored);

  const std::span<const ScoredPair> kept(report.kept);
  bool have_vs_solo = false;
  for (const ScoredPair& s : kept) {
    have_vs_solo |= s.pair.condition == Condition::kImitation &&
                    s.relation() == Relation::kIntraSpeakerVsSolo;
  }
  const Relation comparison =
      have_vs_solo ? Relation::kIntraSpeakerVsSolo : Relation::kIntraSpeaker;
  for (const std::string& speaker : speakers) {
    try {
      SpeakerScores s;
      s.speaker = speaker;
      s.imitation_ability = ImitationAbility(kept, kept, speaker, comparison);
      s.convergence_degree = ConvergenceDegree(kept, kept, speaker);
      report.speakers.push_back(s);
    } catch (const DataError&) {
      report.skipped_speakers.push_back(speaker);
    }
  }

  std::vector<double> ability, degree;
  for (const SpeakerScores& s : report.speakers) {
    ability.push_back(s.imitation_ability);
    degree.push_back(s.convergence_degree);
  }
  const auto distinct = [](const std::vector<double>& v) {
    return std::set<double>(v.begin(), v.end()).size() >= 2;
  };
  if (distinct(ability) && distinct(degree)) {
    const std::vector<double> a = MinMaxNormalize(ability);
    const std::vector<double> d = MinMaxNormalize(degree);
    for (std::size_t i = 0; i < report.speakers.size(); ++i) {
      report.speakers[i].imitation_ability_norm = a[i];
      report.speakers[i].convergence_degree_norm = d[i];
    }
    if (ability.size() >= 3) report.correlation = Pearson(a, d);
  }
  return report;
}

void to_json(nlohmann::json& j, const Summary& s) {
  j = {{"mean", s.mean}, {"std", s.std}, {"n", s.n}};
}

void to_json(nlohmann::json& j, const Correlation& c) {
  j = {{"r", c.r}, {"p", c.p}, {"n", c.n}};
}

void to_json(nlohmann::json& j, const SpeakerScores& s) {
  j = {{"speaker", s.speaker},
       {"imitation_ability", s.imitation_ability},
       {"convergence_degree", s.convergence_degree}};
  j["imitation_ability_norm"] =
      s.imitation_ability_norm ? nlohmann::json(*s.imitation_ability_norm) : nlohmann::json(nullptr);
  j["convergence_degree_norm"] =
      s.convergence_degree_norm ? nlohmann::json(*s.convergence_degree_norm) : nlohmann::json(nullptr);
}

namespace {

nlohmann::json SummariesJson(const std::map<Condition, std::map<Relation, Summary>>& m) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [condition, rel] : m) {
    nlohmann::json& c = out[std::string(ToString(condition))];
    for (const auto& [relation, summary] : rel) c[std::string(ToString(relation))] = summary;
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const ConvergenceReport& r) {
  j = {{"pairs_scored", r.pairs_scored},
       {"pairs_kept", r.kept.size()},
       {"conditions", SummariesJson(r.summaries)},
       {"conditions_unfiltered", SummariesJson(r.unfiltered_summaries)},
       {"speakers", r.speakers},
       {"skipped_speakers", r.skipped_speakers}};
  j["correlation"] = r.correlation ? nlohmann::json(*r.correlation) : nlohmann::json(nullptr);
}

void EmitReport(const ConvergenceReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  auto open = [&](const char* name) {
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw DataError("cannot write " + (out_dir / name).string());
    return f;
  };
  {
    std::ofstream f = open("report.json");
    f << nlohmann::json(report).dump(2) << '\n';
  }
  {
    std::ofstream f = open("similarity_distributions.csv");
    f << "condition,relation,similarity\n";
    for (const ScoredPair& s : report.kept) {
      f << ToString(s.pair.condition) << ',' << ToString(s.relation()) << ','
        << Number(s.similarity) << '\n';
    }
  }
  {
    std::ofstream f = open("speaker_scores.csv");
    f << "speaker,imitation_ability_norm,convergence_degree_norm\n";
    for (const SpeakerScores& s : report.speakers) {
      if (!s.imitation_ability_norm) continue;
      f << s.speaker << ',' << Number(*s.imitation_ability_norm) << ','
        << Number(*s.convergence_degree_norm) << '\n';
    }
  }
}

}  // namespace artconv
