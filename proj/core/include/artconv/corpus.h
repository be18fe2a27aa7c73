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

#ifndef ARTCONV_CORPUS_H_
#define ARTCONV_CORPUS_H_

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace artconv {

// Number of sentences in the reading script.
inline constexpr int kScriptSentences = 80;

enum class Condition { kSolo, kInteractive, kImitation };

std::string_view ToString(Condition condition);
Condition ParseCondition(std::string_view text);

struct SpeakerRecord {
  std::string id;
  // Free-form attributes (native language, sex, ...) carried through
  // untouched.
  nlohmann::json attributes = nlohmann::json::object();
};

struct Dyad {
  std::string id;
  std::string first;   // speaker id
  std::string second;  // speaker id
};

// Identifies one recorded utterance. Unique within a manifest.
struct UtteranceKey {
  std::string speaker_id;
  Condition condition = Condition::kSolo;
  int session = 1;
  int sentence_index = 1;

  auto operator<=>(const UtteranceKey&) const = default;
  bool operator==(const UtteranceKey&) const = default;

  std::string ToString() const;
};

struct UtteranceRecord {
  std::string speaker_id;
  std::string dyad_id;
  Condition condition = Condition::kSolo;
  int session = 1;
  int sentence_index = 1;
  // Either may be empty; non-empty paths are resolved against the
  // manifest's directory at load time.
  std::string audio_path;
  std::string feature_path;

  UtteranceKey key() const {
    return {speaker_id, condition, session, sentence_index};
  }
};

// Speakers, dyads and utterances of a recorded (or synthetic) corpus.
// Construct through Validate() or LoadManifest(); both enforce the
// invariants below.
//   - every speaker appears in exactly one dyad, dyad members distinct
//   - (speaker, condition, session, sentence) keys are unique
//   - sentence indices lie in [1, script_length], script_length <= 80
//   - a speaker's solo utterances share a single session
class CorpusManifest {
 public:
  std::vector<SpeakerRecord> speakers;
  std::vector<Dyad> dyads;
  std::vector<UtteranceRecord> utterances;
  int script_length = kScriptSentences;

  // Checks every invariant, fills missing utterance dyad ids and builds
  // lookup indexes. Throws DataError on violation.
  void Validate();

  const Dyad& DyadOf(const std::string& speaker_id) const;
  const std::string& PartnerOf(const std::string& speaker_id) const;
  const UtteranceRecord* Find(const UtteranceKey& key) const;
  bool HasSpeaker(const std::string& speaker_id) const;

  // Utterances of one speaker in one condition, ordered by
  // (session, sentence_index).
  std::vector<const UtteranceRecord*> UtterancesOf(const std::string& speaker_id,
                                                   Condition condition) const;

 private:
  std::map<std::string, std::size_t> dyad_of_speaker_;
  std::map<UtteranceKey, std::size_t> utterance_index_;
};

CorpusManifest ManifestFromJson(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir = {});
nlohmann::json ManifestToJson(const CorpusManifest& manifest);

CorpusManifest LoadManifest(const std::filesystem::path& path);
// Writes paths relative to the manifest's directory when they live below it.
void SaveManifest(const CorpusManifest& manifest,
                  const std::filesystem::path& path);

struct PairExample {
  UtteranceKey left;
  UtteranceKey right;
  int label = 0;  // 1 = same speaker
  Condition condition = Condition::kSolo;
  // Cross-condition pair: left is a non-solo utterance, right is the same
  // speaker's solo reading of the same sentence.
  bool versus_solo = false;
};

void to_json(nlohmann::json& j, const UtteranceKey& key);
void from_json(const nlohmann::json& j, UtteranceKey& key);
void to_json(nlohmann::json& j, const PairExample& pair);
void from_json(const nlohmann::json& j, PairExample& pair);

nlohmann::json PairsToJson(const std::vector<PairExample>& pairs);
std::vector<PairExample> PairsFromJson(const nlohmann::json& doc);
void SavePairs(const std::vector<PairExample>& pairs,
               const std::filesystem::path& path);
std::vector<PairExample> LoadPairs(const std::filesystem::path& path);

struct SentenceRange {
  int lo = 1;
  int hi = 0;  // inclusive; hi < lo means empty

  bool empty() const { return hi < lo; }
  bool contains(int index) const { return index >= lo && index <= hi; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
};

SentenceRange ParseRange(std::string_view text);  // "LO:HI"

// Solo pairs within a sentence range. Positives: every unordered pair of
// distinct sentences read by the same speaker. Negatives: for each dyad,
// every (first-member sentence, second-member sentence) combination,
// equal indices included.
std::vector<PairExample> BuildSoloPairs(const CorpusManifest& manifest,
                                        SentenceRange range);

enum class NegativeScope {
  kAnySession,   // negatives may pair utterances from different sessions
  kSameSession,  // both utterances must come from one session
};

// Pairs for the interactive or imitation condition over the chosen
// sessions. Positives join consecutive utterances of one speaker inside a
// session (ordered by sentence index); negatives join the two dyad
// members' readings of the same sentence.
std::vector<PairExample> BuildConditionPairs(
    const CorpusManifest& manifest, Condition condition,
    const std::vector<int>& sessions,
    NegativeScope scope = NegativeScope::kAnySession,
    std::optional<SentenceRange> range = std::nullopt);

// Pairs every non-solo utterance in the chosen sessions with the same
// speaker's solo reading of that sentence (label 1, versus_solo set).
std::vector<PairExample> BuildBaselinePairs(const CorpusManifest& manifest,
                                            Condition condition,
                                            const std::vector<int>& sessions);

struct SentenceSplit {
  SentenceRange train;
  SentenceRange validation;
  SentenceRange test;
  std::vector<std::string> warnings;
};

// Halves / quarter / quarter of the script: 1-40, 41-60, 61-80 for the
// 80-sentence script. Ranges without any solo utterance in the manifest
// are returned empty with a warning.
SentenceSplit SplitBySentence(const CorpusManifest& manifest);
SentenceSplit SplitScript(int script_length);

std::vector<int> SessionsOf(const CorpusManifest& manifest,
                            Condition condition);

}  // namespace artconv

#endif  // ARTCONV_CORPUS_H_
