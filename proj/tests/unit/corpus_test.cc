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

#include "artconv/corpus.h"

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "artconv/error.h"
#include "oracles/pair_oracle.h"
#include "test_util.h"

namespace artconv {
namespace {

using testing::SoloManifest;

std::size_t CountLabel(const std::vector<PairExample>& pairs, int label) {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(), [label](const PairExample& p) { return p.label == label; }));
}

nlohmann::json TwoSpeakerDoc() {
  nlohmann::json doc = {{"speakers", {{{"speaker_id", "A"}, {"l1", "de"}}, "B"}},
                        {"dyads", {{{"dyad_id", "D1"}, {"speakers", {"A", "B"}}}}},
                        {"utterances", nlohmann::json::array()}};
  for (const char* s : {"A", "B"}) {
    for (int k = 1; k <= 4; ++k) {
      doc["utterances"].push_back(
          {{"speaker_id", s}, {"condition", "solo"}, {"session", 1}, {"sentence_index", k}});
    }
  }
  return doc;
}

TEST(ManifestTest, LoadsWellFormedFile) {
  testing::TempDir dir;
  const auto path = dir.path() / "manifest.json";
  std::ofstream(path) << TwoSpeakerDoc().dump();
  const CorpusManifest m = LoadManifest(path);
  EXPECT_EQ(m.utterances.size(), 8u);
  EXPECT_EQ(m.PartnerOf("A"), "B");
  EXPECT_EQ(m.speakers[0].attributes.at("l1"), "de");
  EXPECT_EQ(m.utterances[0].dyad_id, "D1");
}

TEST(ManifestTest, RejectsSpeakerInTwoDyads) {
  nlohmann::json doc = TwoSpeakerDoc();
  doc["speakers"].push_back("C");
  doc["dyads"].push_back(nlohmann::json::array({"A", "C"}));
  try {
    ManifestFromJson(doc);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("speaker in multiple dyads"), std::string::npos);
  }
}

TEST(ManifestTest, RejectsDuplicateUtterance) {
  nlohmann::json doc = TwoSpeakerDoc();
  doc["utterances"].push_back(doc["utterances"][0]);
  try {
    ManifestFromJson(doc);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate utterance"), std::string::npos);
  }
}

TEST(ManifestTest, RejectsSpeakerWithoutDyadAndSelfDyad) {
  nlohmann::json doc = TwoSpeakerDoc();
  doc["speakers"].push_back("C");
  EXPECT_THROW(ManifestFromJson(doc), DataError);
  doc = TwoSpeakerDoc();
  doc["dyads"] = nlohmann::json::array({nlohmann::json::array({"A", "A"})});
  EXPECT_THROW(ManifestFromJson(doc), DataError);
}

TEST(ManifestTest, RejectsSentenceOutsideScript) {
  nlohmann::json doc = TwoSpeakerDoc();
  doc["utterances"][0]["sentence_index"] = 81;
  EXPECT_THROW(ManifestFromJson(doc), DataError);
}

TEST(ManifestTest, JsonRoundTrip) {
  const CorpusManifest m = ManifestFromJson(TwoSpeakerDoc());
  const CorpusManifest back = ManifestFromJson(ManifestToJson(m));
  ASSERT_EQ(back.utterances.size(), m.utterances.size());
  for (std::size_t i = 0; i < m.utterances.size(); ++i) {
    EXPECT_EQ(back.utterances[i].key(), m.utterances[i].key());
  }
}

TEST(SoloPairsTest, OneDyadFourSentences) {
  const CorpusManifest m = SoloManifest(1, 4);
  const auto pairs = BuildSoloPairs(m, {1, 4});
  EXPECT_EQ(CountLabel(pairs, 1), 12u);
  EXPECT_EQ(CountLabel(pairs, 0), 16u);
}

TEST(SoloPairsTest, PaperScaleCounts) {
  const CorpusManifest m = SoloManifest(29, 80);
  const auto train = BuildSoloPairs(m, {1, 40});
  EXPECT_EQ(CountLabel(train, 1), 45240u);
  EXPECT_EQ(CountLabel(train, 0), 46400u);
  const auto val = BuildSoloPairs(m, {41, 60});
  EXPECT_EQ(CountLabel(val, 1), 11020u);
  EXPECT_EQ(CountLabel(val, 0), 11600u);
}

TEST(SoloPairsTest, MatchesBruteForceOnRandomManifests) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int dyads = 1 + static_cast<int>(rng() % 3);
    CorpusManifest m = SoloManifest(dyads, 12, 12);
    // Drop a random subset of utterances so speakers have unequal counts.
    std::erase_if(m.utterances, [&](const UtteranceRecord&) { return rng() % 4 == 0; });
    m.Validate();
    const int lo = 1 + static_cast<int>(rng() % 6);
    const int hi = lo + static_cast<int>(rng() % 6);
    std::vector<PairExample> pairs;
    try {
      pairs = BuildSoloPairs(m, {lo, hi});
    } catch (const DataError&) {
      EXPECT_TRUE(oracle::BruteForceSoloPairs(m, lo, hi).empty());
      continue;
    }
    const auto expected = oracle::BruteForceSoloPairs(m, lo, hi);
    EXPECT_EQ(oracle::CanonicalSet(pairs), expected);
    EXPECT_EQ(pairs.size(), expected.size());  // no duplicates
    for (const PairExample& p : pairs) {
      EXPECT_EQ(p.label == 1, p.left.speaker_id == p.right.speaker_id);
      if (p.label == 0) {
        EXPECT_TRUE(oracle::SameDyad(m, p.left.speaker_id, p.right.speaker_id));
      }
    }
  }
}

TEST(SoloPairsTest, EmptyRangeIsAnError) {
  const CorpusManifest m = SoloManifest(1, 4);
  EXPECT_THROW(BuildSoloPairs(m, {5, 4}), DataError);
  EXPECT_THROW(BuildSoloPairs(m, {10, 12}), DataError);
}

CorpusManifest ConditionManifest() {
  CorpusManifest m;
  m.speakers = {{"A", {}}, {"B", {}}};
  m.dyads = {{"D", "A", "B"}};
  auto add = [&](const std::string& s, int session, int k) {
    UtteranceRecord u;
    u.speaker_id = s;
    u.condition = Condition::kInteractive;
    u.session = session;
    u.sentence_index = k;
    m.utterances.push_back(u);
  };
  for (int k : {1, 3, 5}) add("A", 1, k);
  add("B", 2, 7);
  add("A", 1, 7);
  m.Validate();
  return m;
}

TEST(ConditionPairsTest, ConsecutiveUtterancesAndSharedSentences) {
  const CorpusManifest m = ConditionManifest();
  const auto pairs = BuildConditionPairs(m, Condition::kInteractive, {1, 2});
  std::vector<std::pair<int, int>> positives;
  std::size_t negatives = 0;
  for (const PairExample& p : pairs) {
    EXPECT_EQ(p.condition, Condition::kInteractive);
    if (p.label == 1) {
      positives.emplace_back(p.left.sentence_index, p.right.sentence_index);
    } else {
      ++negatives;
      EXPECT_EQ(p.left.sentence_index, 7);
      EXPECT_EQ(p.right.sentence_index, 7);
    }
  }
  const std::vector<std::pair<int, int>> expected = {{1, 3}, {3, 5}, {5, 7}};
  EXPECT_EQ(positives, expected);
  EXPECT_EQ(negatives, 1u);
}

TEST(ConditionPairsTest, SameSessionScopeDropsCrossSessionNegatives) {
  const CorpusManifest m = ConditionManifest();
  const auto pairs =
      BuildConditionPairs(m, Condition::kInteractive, {1, 2}, NegativeScope::kSameSession);
  EXPECT_EQ(CountLabel(pairs, 0), 0u);
}

TEST(ConditionPairsTest, MissingConditionOrSessionIsAnError) {
  const CorpusManifest m = ConditionManifest();
  EXPECT_THROW(BuildConditionPairs(m, Condition::kImitation, {}), DataError);
  EXPECT_THROW(BuildConditionPairs(m, Condition::kInteractive, {3}), DataError);
  EXPECT_THROW(BuildConditionPairs(m, Condition::kSolo, {}), DataError);
}

TEST(BaselinePairsTest, PairsEachUtteranceWithItsSoloReading) {
  CorpusManifest m = ConditionManifest();
  for (int k = 1; k <= 7; ++k) {
    UtteranceRecord u;
    u.speaker_id = "A";
    u.sentence_index = k;
    m.utterances.push_back(u);
  }
  m.Validate();
  const auto pairs = BuildBaselinePairs(m, Condition::kInteractive, {});
  ASSERT_EQ(pairs.size(), 4u);  // A's sentences 1, 3, 5, 7; B has no solo readings
  for (const PairExample& p : pairs) {
    EXPECT_EQ(p.label, 1);
    EXPECT_TRUE(p.versus_solo);
    EXPECT_EQ(p.right.condition, Condition::kSolo);
    EXPECT_EQ(p.left.sentence_index, p.right.sentence_index);
  }
}

TEST(SplitTest, StandardScript) {
  const CorpusManifest m = SoloManifest(29, 80);
  const SentenceSplit split = SplitBySentence(m);
  EXPECT_EQ(split.train.lo, 1);
  EXPECT_EQ(split.train.hi, 40);
  EXPECT_EQ(split.validation.lo, 41);
  EXPECT_EQ(split.validation.hi, 60);
  EXPECT_EQ(split.test.lo, 61);
  EXPECT_EQ(split.test.hi, 80);
  EXPECT_TRUE(split.warnings.empty());
  EXPECT_EQ(BuildSoloPairs(m, split.train).size(), 91640u);
  EXPECT_EQ(BuildSoloPairs(m, split.validation).size(), 22620u);
  EXPECT_EQ(BuildSoloPairs(m, split.test).size(), 22620u);
}

TEST(SplitTest, RangesAreDisjointAndCover) {
  for (int length = 1; length <= 80; ++length) {
    const SentenceSplit s = SplitScript(length);
    std::vector<int> seen(static_cast<std::size_t>(length) + 1, 0);
    for (const SentenceRange& r : {s.train, s.validation, s.test}) {
      for (int k = r.lo; k <= r.hi; ++k) ++seen[static_cast<std::size_t>(k)];
    }
    for (int k = 1; k <= length; ++k) EXPECT_EQ(seen[static_cast<std::size_t>(k)], 1);
  }
}

TEST(SplitTest, MissingTestSentencesGiveEmptyRangeWithWarning) {
  const CorpusManifest m = SoloManifest(1, 60);
  const SentenceSplit split = SplitBySentence(m);
  EXPECT_TRUE(split.test.empty());
  EXPECT_FALSE(split.warnings.empty());
  EXPECT_FALSE(split.train.empty());
}

TEST(PairsFileTest, RoundTrip) {
  testing::TempDir dir;
  const CorpusManifest m = SoloManifest(1, 5);
  auto pairs = BuildSoloPairs(m, {1, 5});
  pairs[0].versus_solo = true;
  SavePairs(pairs, dir.path() / "pairs.json");
  const auto back = LoadPairs(dir.path() / "pairs.json");
  ASSERT_EQ(back.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(back[i].left, pairs[i].left);
    EXPECT_EQ(back[i].right, pairs[i].right);
    EXPECT_EQ(back[i].label, pairs[i].label);
    EXPECT_EQ(back[i].versus_solo, pairs[i].versus_solo);
  }
}

TEST(RangeTest, Parse) {
  const SentenceRange r = ParseRange("3:17");
  EXPECT_EQ(r.lo, 3);
  EXPECT_EQ(r.hi, 17);
  EXPECT_THROW(ParseRange("3-17"), DataError);
  EXPECT_THROW(ParseRange("a:b"), DataError);
}

}  // namespace
}  // namespace artconv
