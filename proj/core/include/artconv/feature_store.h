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

#ifndef ARTCONV_FEATURE_STORE_H_
#define ARTCONV_FEATURE_STORE_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include <Eigen/Core>

#include "artconv/corpus.h"
#include "artconv/dsp.h"
#include "artconv/net.h"

namespace artconv {

// "<speaker>_<condition>_s<session>_<sentence>.artf"
std::string FeatureFileName(const UtteranceKey& key);

// In-memory features keyed by utterance, widened to double for the network.
class FeatureStore {
 public:
  void Insert(const UtteranceKey& key, const FeatureMatrix& f);
  bool Contains(const UtteranceKey& key) const { return frames_.count(key) > 0; }
  // Throws DataError when the utterance has no features.
  SequenceRef Get(const UtteranceKey& key) const;
  std::size_t size() const { return frames_.size(); }

  // Reads the feature file of every utterance referenced by `pairs` (or of
  // every manifest utterance when `pairs` is empty). An utterance's own
  // feature_path wins over the directory naming convention.
  static FeatureStore Load(const CorpusManifest& manifest,
                           const std::filesystem::path& dir,
                           std::span<const PairExample> pairs = {});

 private:
  std::map<UtteranceKey, Eigen::MatrixXd> frames_;
};

// Decodes each utterance's audio, extracts features and writes them to
// out_dir under FeatureFileName(). Returns the number of files written.
std::size_t ExtractCorpusFeatures(const CorpusManifest& manifest,
                                  const std::filesystem::path& out_dir,
                                  const MfccConfig& cfg);

}  // namespace artconv

#endif  // ARTCONV_FEATURE_STORE_H_
