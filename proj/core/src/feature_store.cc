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

#include "artconv/feature_store.h"

#include <set>

#include "artconv/error.h"
#include "artconv/feature_io.h"
#include "artconv/parallel.h"
#include "artconv/wav.h"

namespace artconv {

namespace fs = std::filesystem;

std::string FeatureFileName(const UtteranceKey& key) {
  return key.speaker_id + "_" + std::string(ToString(key.condition)) + "_s" +
         std::to_string(key.session) + "_" + std::to_string(key.sentence_index) +
         ".artf";
}

void FeatureStore::Insert(const UtteranceKey& key, const FeatureMatrix& f) {
  if (f.num_frames() < 1) {
    throw DataError("features for " + key.ToString() + " have no frames");
  }
  frames_[key] = f.frames.cast<double>();
}

SequenceRef FeatureStore::Get(const UtteranceKey& key) const {
  auto it = frames_.find(key);
  if (it == frames_.end()) {
    throw DataError("missing features for utterance " + key.ToString());
  }
  return {&it->second, static_cast<int>(it->second.rows())};
}

FeatureStore FeatureStore::Load(const CorpusManifest& manifest,
                                const fs::path& dir,
                                std::span<const PairExample> pairs) {
  std::set<UtteranceKey> wanted;
  if (pairs.empty()) {
    for (const UtteranceRecord& u : manifest.utterances) wanted.insert(u.key());
  } else {
    for (const PairExample& p : pairs) {
      wanted.insert(p.left);
      wanted.insert(p.right);
    }
  }
  FeatureStore store;
  for (const UtteranceKey& key : wanted) {
    const UtteranceRecord* record = manifest.Find(key);
    if (record == nullptr) {
      throw DataError("utterance " + key.ToString() + " is not in the manifest");
    }
    const fs::path path = record->feature_path.empty()
                              ? dir / FeatureFileName(key)
                              : fs::path(record->feature_path);
    store.Insert(key, ReadFeatures(path));
  }
  return store;
}

std::size_t ExtractCorpusFeatures(const CorpusManifest& manifest,
                                  const fs::path& out_dir, const MfccConfig& cfg) {
  fs::create_directories(out_dir);
  const MfccExtractor extractor(cfg);
  std::vector<const UtteranceRecord*> todo;
  for (const UtteranceRecord& u : manifest.utterances) {
    if (u.audio_path.empty()) {
      throw DataError("utterance " + u.key().ToString() + " has no audio_path");
    }
    todo.push_back(&u);
  }
  ParallelFor(todo.size(), [&](std::size_t i) {
    const UtteranceRecord& u = *todo[i];
    try {
      const Waveform w = LoadAudio(u.audio_path);
      WriteFeatures(ExtractFeatures(w, extractor), out_dir / FeatureFileName(u.key()));
    } catch (const DataError& e) {
      throw DataError(u.key().ToString() + ": " + e.what());
    }
  });
  return todo.size();
}

}  // namespace artconv
