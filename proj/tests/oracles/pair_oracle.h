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

#ifndef ARTCONV_TESTS_ORACLES_PAIR_ORACLE_H_
#define ARTCONV_TESTS_ORACLES_PAIR_ORACLE_H_

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "artconv/corpus.h"

namespace artconv::oracle {

// Unordered pair identity, independent of left/right orientation.
using PairId = std::tuple<UtteranceKey, UtteranceKey, int>;

inline PairId Canonical(const UtteranceKey& a, const UtteranceKey& b, int label) {
  return a < b ? PairId{a, b, label} : PairId{b, a, label};
}

inline std::set<PairId> CanonicalSet(const std::vector<PairExample>& pairs) {
  std::set<PairId> out;
  for (const PairExample& p : pairs) out.insert(Canonical(p.left, p.right, p.label));
  return out;
}

inline bool SameDyad(const CorpusManifest& m, const std::string& a, const std::string& b) {
  for (const Dyad& d : m.dyads) {
    if ((d.first == a && d.second == b) || (d.first == b && d.second == a)) return true;
  }
  return false;
}

// Every unordered pair of solo utterances inside [lo, hi], kept when both
// sides share a speaker (label 1) or belong to one dyad (label 0).
inline std::set<PairId> BruteForceSoloPairs(const CorpusManifest& m, int lo, int hi) {
  std::vector<UtteranceKey> solo;
  for (const UtteranceRecord& u : m.utterances) {
    if (u.condition == Condition::kSolo && u.sentence_index >= lo && u.sentence_index <= hi) {
      solo.push_back(u.key());
    }
  }
  std::set<PairId> out;
  for (std::size_t i = 0; i < solo.size(); ++i) {
    for (std::size_t j = i + 1; j < solo.size(); ++j) {
      const UtteranceKey& a = solo[i];
      const UtteranceKey& b = solo[j];
      if (a.speaker_id == b.speaker_id) {
        out.insert(Canonical(a, b, 1));
      } else if (SameDyad(m, a.speaker_id, b.speaker_id)) {
        out.insert(Canonical(a, b, 0));
      }
    }
  }
  return out;
}

}  // namespace artconv::oracle

#endif  // ARTCONV_TESTS_ORACLES_PAIR_ORACLE_H_
