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

#ifndef ARTCONV_TESTS_UNIT_TEST_UTIL_H_
#define ARTCONV_TESTS_UNIT_TEST_UTIL_H_

#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "artconv/corpus.h"

namespace artconv::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "artconv_";
    if (info != nullptr) name += std::string(info->test_suite_name()) + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Metadata-only manifest: `dyads` dyads of speakers P001.., every speaker
// reading solo sentences 1..sentences.
inline CorpusManifest SoloManifest(int dyads, int sentences, int script_length = 80) {
  CorpusManifest m;
  m.script_length = script_length;
  for (int d = 0; d < dyads; ++d) {
    const std::string a = "P" + std::to_string(1000 + 2 * d);
    const std::string b = "P" + std::to_string(1001 + 2 * d);
    m.speakers.push_back({a, {}});
    m.speakers.push_back({b, {}});
    m.dyads.push_back({"D" + std::to_string(d), a, b});
    for (const std::string& s : {a, b}) {
      for (int k = 1; k <= sentences; ++k) {
        UtteranceRecord u;
        u.speaker_id = s;
        u.sentence_index = k;
        m.utterances.push_back(u);
      }
    }
  }
  m.Validate();
  return m;
}

}  // namespace artconv::testing

#endif  // ARTCONV_TESTS_UNIT_TEST_UTIL_H_
