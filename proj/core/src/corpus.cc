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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "artconv/error.h"

namespace artconv {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view ToString(Condition condition) {
  switch (condition) {
    case Condition::kSolo:
      return "solo";
    case Condition::kInteractive:
      return "interactive";
    case Condition::kImitation:
      return "imitation";
  }
  return "unknown";
}

Condition ParseCondition(std::string_view text) {
  if (text == "solo") return Condition::kSolo;
  if (text == "interactive") return Condition::kInteractive;
  if (text == "imitation") return Condition::kImitation;
  throw DataError("unknown condition \"" + std::string(text) + "\"");
}

std::string UtteranceKey::ToString() const {
  std::ostringstream out;
  out << speaker_id << '/' << artconv::ToString(condition) << "/s" << session
      << "/" << sentence_index;
  return out.str();
}

void CorpusManifest::Validate() {
  if (script_length < 1 || script_length > kScriptSentences) {
    throw DataError("script_length must lie in [1, 80]");
  }
  std::set<std::string> speaker_ids;
  for (const SpeakerRecord& speaker : speakers) {
    if (speaker.id.empty()) throw DataError("speaker with empty id");
    if (!speaker_ids.insert(speaker.id).second) {
      throw DataError("duplicate speaker \"" + speaker.id + "\"");
    }
  }

  dyad_of_speaker_.clear();
  std::set<std::string> dyad_ids;
  for (std::size_t i = 0; i < dyads.size(); ++i) {
    Dyad& dyad = dyads[i];
    if (dyad.id.empty()) dyad.id = dyad.first + "+" + dyad.second;
    if (!dyad_ids.insert(dyad.id).second) {
      throw DataError("duplicate dyad id \"" + dyad.id + "\"");
    }
    if (dyad.first == dyad.second) {
      throw DataError("dyad \"" + dyad.id + "\" pairs a speaker with itself");
    }
    for (const std::string* member : {&dyad.first, &dyad.second}) {
      if (!speaker_ids.count(*member)) {
        throw DataError("dyad \"" + dyad.id + "\" names unknown speaker \"" +
                        *member + "\"");
      }
      if (!dyad_of_speaker_.emplace(*member, i).second) {
        throw DataError("speaker in multiple dyads: \"" + *member + "\"");
      }
    }
  }
  for (const SpeakerRecord& speaker : speakers) {
    if (!dyad_of_speaker_.count(speaker.id)) {
      throw DataError("speaker in no dyad: \"" + speaker.id + "\"");
    }
  }

  utterance_index_.clear();
  std::map<std::string, int> solo_session;
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    UtteranceRecord& utt = utterances[i];
    if (!speaker_ids.count(utt.speaker_id)) {
      throw DataError("utterance of unknown speaker \"" + utt.speaker_id +
                      "\"");
    }
    const Dyad& dyad = dyads[dyad_of_speaker_.at(utt.speaker_id)];
    if (utt.dyad_id.empty()) {
      utt.dyad_id = dyad.id;
    } else if (utt.dyad_id != dyad.id) {
      throw DataError("utterance " + utt.key().ToString() +
                      " names dyad \"" + utt.dyad_id + "\" but speaker is in \"" +
                      dyad.id + "\"");
    }
    if (utt.sentence_index < 1 || utt.sentence_index > script_length) {
      throw DataError("utterance " + utt.key().ToString() +
                      ": sentence_index outside the script range");
    }
    if (utt.session < 1) {
      throw DataError("utterance " + utt.key().ToString() +
                      ": session must be positive");
    }
    if (utt.condition == Condition::kSolo) {
      auto [it, inserted] = solo_session.emplace(utt.speaker_id, utt.session);
      if (!inserted && it->second != utt.session) {
        throw DataError("speaker \"" + utt.speaker_id +
                        "\" has solo utterances in more than one session");
      }
    }
    if (!utterance_index_.emplace(utt.key(), i).second) {
      throw DataError("duplicate utterance " + utt.key().ToString());
    }
  }
}

const Dyad& CorpusManifest::DyadOf(const std::string& speaker_id) const {
  auto it = dyad_of_speaker_.find(speaker_id);
  if (it == dyad_of_speaker_.end()) {
    throw DataError("unknown speaker \"" + speaker_id + "\"");
  }
  return dyads[it->second];
}

const std::string& CorpusManifest::PartnerOf(
    const std::string& speaker_id) const {
  const Dyad& dyad = DyadOf(speaker_id);
  return dyad.first == speaker_id ? dyad.second : dyad.first;
}

const UtteranceRecord* CorpusManifest::Find(const UtteranceKey& key) const {
  auto it = utterance_index_.find(key);
  return it == utterance_index_.end() ? nullptr : &utterances[it->second];
}

bool CorpusManifest::HasSpeaker(const std::string& speaker_id) const {
  return dyad_of_speaker_.count(speaker_id) > 0;
}

std::vector<const UtteranceRecord*> CorpusManifest::UtterancesOf(
    const std::string& speaker_id, Condition condition) const {
  std::vector<const UtteranceRecord*> out;
  for (const UtteranceRecord& utt : utterances) {
    if (utt.speaker_id == speaker_id && utt.condition == condition) {
      out.push_back(&utt);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return std::tie(a->session, a->sentence_index) <
           std::tie(b->session, b->sentence_index);
  });
  return out;
}

// --- JSON ------------------------------------------------------------------

namespace {

std::string ResolvePath(const std::string& path, const fs::path& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  return p.is_absolute() ? path : (base_dir / p).lexically_normal().string();
}

std::string RelativizePath(const std::string& path, const fs::path& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  fs::path p(path);
  if (!p.is_absolute()) return path;
  fs::path rel = p.lexically_relative(base_dir);
  if (rel.empty() || *rel.begin() == "..") return path;
  return rel.string();
}

const json& Require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DataError(std::string(where) + ": missing field \"" + key + "\"");
  }
  return obj.at(key);
}

}  // namespace

CorpusManifest ManifestFromJson(const json& doc, const fs::path& base_dir) {
  CorpusManifest manifest;
  try {
    if (!doc.is_object()) throw DataError("manifest must be a JSON object");
    manifest.script_length = doc.value("script_length", kScriptSentences);
    for (const json& s : Require(doc, "speakers", "manifest")) {
      SpeakerRecord speaker;
      if (s.is_string()) {
        speaker.id = s.get<std::string>();
      } else {
        speaker.id = s.contains("speaker_id") ? s.at("speaker_id").get<std::string>()
                                              : Require(s, "id", "speaker").get<std::string>();
        speaker.attributes = s;
        speaker.attributes.erase("speaker_id");
        speaker.attributes.erase("id");
      }
      manifest.speakers.push_back(std::move(speaker));
    }
    for (const json& d : Require(doc, "dyads", "manifest")) {
      Dyad dyad;
      const json* members = &d;
      if (d.is_object()) {
        dyad.id = d.value("dyad_id", std::string());
        members = &Require(d, "speakers", "dyad");
      }
      if (!members->is_array() || members->size() != 2) {
        throw DataError("dyad must list exactly two speakers");
      }
      dyad.first = (*members)[0].get<std::string>();
      dyad.second = (*members)[1].get<std::string>();
      manifest.dyads.push_back(std::move(dyad));
    }
    for (const json& u : Require(doc, "utterances", "manifest")) {
      UtteranceRecord utt;
      utt.speaker_id = Require(u, "speaker_id", "utterance").get<std::string>();
      utt.dyad_id = u.value("dyad_id", std::string());
      utt.condition =
          ParseCondition(Require(u, "condition", "utterance").get<std::string>());
      utt.session = u.value("session", 1);
      utt.sentence_index = Require(u, "sentence_index", "utterance").get<int>();
      utt.audio_path = ResolvePath(u.value("audio_path", std::string()), base_dir);
      utt.feature_path =
          ResolvePath(u.value("feature_path", std::string()), base_dir);
      manifest.utterances.push_back(std::move(utt));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest parse failure: ") + e.what());
  }
  manifest.Validate();
  return manifest;
}

json ManifestToJson(const CorpusManifest& manifest) {
  json doc;
  doc["script_length"] = manifest.script_length;
  json speakers = json::array();
  for (const SpeakerRecord& s : manifest.speakers) {
    json entry = s.attributes.is_object() ? s.attributes : json::object();
    entry["speaker_id"] = s.id;
    speakers.push_back(std::move(entry));
  }
  doc["speakers"] = std::move(speakers);
  json dyads = json::array();
  for (const Dyad& d : manifest.dyads) {
    dyads.push_back({{"dyad_id", d.id}, {"speakers", {d.first, d.second}}});
  }
  doc["dyads"] = std::move(dyads);
  json utterances = json::array();
  for (const UtteranceRecord& u : manifest.utterances) {
    json entry = {{"speaker_id", u.speaker_id},
                  {"dyad_id", u.dyad_id},
                  {"condition", ToString(u.condition)},
                  {"session", u.session},
                  {"sentence_index", u.sentence_index}};
    if (!u.audio_path.empty()) entry["audio_path"] = u.audio_path;
    if (!u.feature_path.empty()) entry["feature_path"] = u.feature_path;
    utterances.push_back(std::move(entry));
  }
  doc["utterances"] = std::move(utterances);
  return doc;
}

CorpusManifest LoadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("manifest parse failure in " + path.string() + ": " +
                    e.what());
  }
  return ManifestFromJson(doc, fs::absolute(path).parent_path());
}

void SaveManifest(const CorpusManifest& manifest, const fs::path& path) {
  fs::path base = fs::absolute(path).parent_path();
  CorpusManifest copy = manifest;
  for (UtteranceRecord& u : copy.utterances) {
    u.audio_path = RelativizePath(u.audio_path, base);
    u.feature_path = RelativizePath(u.feature_path, base);
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << ManifestToJson(copy).dump(1) << '\n';
}

void to_json(json& j, const UtteranceKey& key) {
  j = json{{"speaker_id", key.speaker_id},
           {"condition", ToString(key.condition)},
           {"session", key.session},
           {"sentence_index", key.sentence_index}};
}

void from_json(const json& j, UtteranceKey& key) {
  key.speaker_id = j.at("speaker_id").get<std::string>();
  key.condition = ParseCondition(j.at("condition").get<std::string>());
  key.session = j.value("session", 1);
  key.sentence_index = j.at("sentence_index").get<int>();
}

void to_json(json& j, const PairExample& pair) {
  j = json{{"left", pair.left},
           {"right", pair.right},
           {"label", pair.label},
           {"condition", ToString(pair.condition)}};
  if (pair.versus_solo) j["versus_solo"] = true;
}

void from_json(const json& j, PairExample& pair) {
  pair.left = j.at("left").get<UtteranceKey>();
  pair.right = j.at("right").get<UtteranceKey>();
  pair.label = j.at("label").get<int>();
  pair.condition = ParseCondition(j.at("condition").get<std::string>());
  pair.versus_solo = j.value("versus_solo", false);
  if (pair.label != 0 && pair.label != 1) {
    throw DataError("pair label must be 0 or 1");
  }
}

json PairsToJson(const std::vector<PairExample>& pairs) {
  std::size_t positives = 0;
  for (const PairExample& p : pairs) positives += p.label == 1;
  return json{{"positives", positives},
              {"negatives", pairs.size() - positives},
              {"pairs", pairs}};
}

std::vector<PairExample> PairsFromJson(const json& doc) {
  try {
    const json& list = doc.is_array() ? doc : doc.at("pairs");
    return list.get<std::vector<PairExample>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("pairs parse failure: ") + e.what());
  }
}

void SavePairs(const std::vector<PairExample>& pairs, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write pairs file " + path.string());
  out << PairsToJson(pairs).dump() << '\n';
}

std::vector<PairExample> LoadPairs(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw DataError("pairs parse failure in " + path.string() + ": " + e.what());
  }
  return PairsFromJson(doc);
}

SentenceRange ParseRange(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DataError("range must be LO:HI, got \"" + std::string(text) + "\"");
  }
  SentenceRange range;
  auto parse = [&](std::string_view part, int& value) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw DataError("bad range bound \"" + std::string(part) + "\"");
    }
  };
  parse(text.substr(0, colon), range.lo);
  parse(text.substr(colon + 1), range.hi);
  return range;
}

// --- Pair construction -----------------------------------------------------

namespace {

std::vector<const UtteranceRecord*> InRange(
    std::vector<const UtteranceRecord*> utts, SentenceRange range) {
  std::erase_if(utts, [&](const UtteranceRecord* u) {
    return !range.contains(u->sentence_index);
  });
  return utts;
}

PairExample MakePair(const UtteranceRecord& a, const UtteranceRecord& b,
                     Condition condition) {
  PairExample pair;
  pair.left = a.key();
  pair.right = b.key();
  pair.label = a.speaker_id == b.speaker_id ? 1 : 0;
  pair.condition = condition;
  return pair;
}

}  // namespace

std::vector<PairExample> BuildSoloPairs(const CorpusManifest& manifest,
                                        SentenceRange range) {
  if (range.empty()) throw DataError("empty sentence range");
  if (range.lo < 1 || range.hi > manifest.script_length) {
    throw DataError("sentence range outside the script");
  }
  std::vector<PairExample> pairs;
  bool any = false;
  for (const SpeakerRecord& speaker : manifest.speakers) {
    auto utts = InRange(manifest.UtterancesOf(speaker.id, Condition::kSolo), range);
    any = any || !utts.empty();
    for (std::size_t i = 0; i < utts.size(); ++i) {
      for (std::size_t j = i + 1; j < utts.size(); ++j) {
        pairs.push_back(MakePair(*utts[i], *utts[j], Condition::kSolo));
      }
    }
  }
  if (!any) throw DataError("no solo utterances in the sentence range");
  for (const Dyad& dyad : manifest.dyads) {
    auto first = InRange(manifest.UtterancesOf(dyad.first, Condition::kSolo), range);
    auto second =
        InRange(manifest.UtterancesOf(dyad.second, Condition::kSolo), range);
    for (const UtteranceRecord* a : first) {
      for (const UtteranceRecord* b : second) {
        pairs.push_back(MakePair(*a, *b, Condition::kSolo));
      }
    }
  }
  return pairs;
}

std::vector<int> SessionsOf(const CorpusManifest& manifest,
                            Condition condition) {
  std::set<int> sessions;
  for (const UtteranceRecord& u : manifest.utterances) {
    if (u.condition == condition) sessions.insert(u.session);
  }
  return {sessions.begin(), sessions.end()};
}

std::vector<PairExample> BuildConditionPairs(const CorpusManifest& manifest,
                                             Condition condition,
                                             const std::vector<int>& sessions,
                                             NegativeScope scope,
                                             std::optional<SentenceRange> range) {
  if (condition == Condition::kSolo) {
    throw DataError("condition pairs are built for interactive or imitation");
  }
  const std::vector<int> available = SessionsOf(manifest, condition);
  if (available.empty()) {
    throw DataError("no utterances for condition " +
                    std::string(ToString(condition)));
  }
  std::vector<int> chosen = sessions.empty() ? available : sessions;
  for (int s : chosen) {
    if (!std::binary_search(available.begin(), available.end(), s)) {
      throw DataError("session " + std::to_string(s) + " has no " +
                      std::string(ToString(condition)) + " utterances");
    }
  }
  auto selected = [&](const UtteranceRecord* u) {
    return std::find(chosen.begin(), chosen.end(), u->session) != chosen.end() &&
           (!range || range->contains(u->sentence_index));
  };
  auto utterances_of = [&](const std::string& speaker) {
    auto utts = manifest.UtterancesOf(speaker, condition);
    std::erase_if(utts, [&](const UtteranceRecord* u) { return !selected(u); });
    return utts;
  };

  std::vector<PairExample> pairs;
  for (const SpeakerRecord& speaker : manifest.speakers) {
    auto utts = utterances_of(speaker.id);  // ordered by (session, sentence)
    for (std::size_t i = 0; i + 1 < utts.size(); ++i) {
      if (utts[i]->session == utts[i + 1]->session) {
        pairs.push_back(MakePair(*utts[i], *utts[i + 1], condition));
      }
    }
  }
  auto by_sentence = [](std::vector<const UtteranceRecord*> utts) {
    std::stable_sort(utts.begin(), utts.end(), [](const auto* a, const auto* b) {
      return a->sentence_index < b->sentence_index;
    });
    return utts;
  };
  for (const Dyad& dyad : manifest.dyads) {
    auto first = by_sentence(utterances_of(dyad.first));
    auto second = by_sentence(utterances_of(dyad.second));
    for (const UtteranceRecord* a : first) {
      for (const UtteranceRecord* b : second) {
        if (a->sentence_index != b->sentence_index) continue;
        if (scope == NegativeScope::kSameSession && a->session != b->session) {
          continue;
        }
        pairs.push_back(MakePair(*a, *b, condition));
      }
    }
  }
  return pairs;
}

std::vector<PairExample> BuildBaselinePairs(const CorpusManifest& manifest,
                                            Condition condition,
                                            const std::vector<int>& sessions) {
  if (condition == Condition::kSolo) {
    throw DataError("baseline pairs compare a non-solo condition with solo");
  }
  std::vector<PairExample> pairs;
  for (const SpeakerRecord& speaker : manifest.speakers) {
    auto solo = manifest.UtterancesOf(speaker.id, Condition::kSolo);
    if (solo.empty()) continue;
    const int solo_session = solo.front()->session;
    for (const UtteranceRecord* u : manifest.UtterancesOf(speaker.id, condition)) {
      if (!sessions.empty() &&
          std::find(sessions.begin(), sessions.end(), u->session) ==
              sessions.end()) {
        continue;
      }
      UtteranceKey baseline{speaker.id, Condition::kSolo, solo_session,
                            u->sentence_index};
      const UtteranceRecord* b = manifest.Find(baseline);
      if (b == nullptr) continue;
      PairExample pair = MakePair(*u, *b, condition);
      pair.versus_solo = true;
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

SentenceSplit SplitScript(int script_length) {
  SentenceSplit split;
  const int train_end = script_length / 2;
  const int val_end = (3 * script_length) / 4;
  split.train = {1, train_end};
  split.validation = {train_end + 1, val_end};
  split.test = {val_end + 1, script_length};
  return split;
}

SentenceSplit SplitBySentence(const CorpusManifest& manifest) {
  SentenceSplit split = SplitScript(manifest.script_length);
  auto check = [&](SentenceRange& range, const char* name) {
    bool covered = std::any_of(
        manifest.utterances.begin(), manifest.utterances.end(),
        [&](const UtteranceRecord& u) {
          return u.condition == Condition::kSolo && range.contains(u.sentence_index);
        });
    if (!covered) {
      std::ostringstream msg;
      msg << name << " range " << range.lo << "-" << range.hi
          << " has no solo utterances; treated as empty";
      split.warnings.push_back(msg.str());
      range.hi = range.lo - 1;
    }
  };
  check(split.train, "train");
  check(split.validation, "validation");
  check(split.test, "test");
  return split;
}

}  // namespace artconv
