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

#include "artconv/synth.h"

#include <fstream>

#include <gtest/gtest.h>

#include "artconv/error.h"
#include "artconv/wav.h"
#include "test_util.h"

namespace artconv {
namespace {

SynthConfig Small() {
  SynthConfig cfg;
  cfg.speakers = 4;
  cfg.sentences = 4;
  cfg.interactive_sessions = 2;
  cfg.imitation_sessions = 1;
  cfg.phones_per_sentence = 3;
  return cfg;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(SynthTest, ConfigValidation) {
  SynthConfig cfg = Small();
  cfg.speakers = 3;
  EXPECT_THROW(cfg.Check(), DataError);
  cfg = Small();
  cfg.lambda = 1.5;
  EXPECT_THROW(cfg.Check(), DataError);
  cfg = Small();
  cfg.sentences = 81;
  EXPECT_THROW(cfg.Check(), DataError);
  cfg = Small();
  cfg.lambda = 0.25;
  const SynthConfig back = nlohmann::json(cfg).get<SynthConfig>();
  EXPECT_DOUBLE_EQ(back.lambda, 0.25);
  EXPECT_EQ(back.sentences, 4);
}

TEST(SynthTest, LambdaEndpoints) {
  SynthConfig cfg = Small();
  const auto voices = SpeakerVoices(cfg, 3);
  cfg.lambda = 0.0;
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(VoiceFor(cfg, 3, s, Condition::kInteractive), VoiceFor(cfg, 3, s, Condition::kSolo));
    EXPECT_EQ(VoiceFor(cfg, 3, s, Condition::kImitation), voices[static_cast<std::size_t>(s)]);
  }
  cfg.lambda = 1.0;
  EXPECT_EQ(VoiceFor(cfg, 3, 1, Condition::kInteractive), voices[0]);
  EXPECT_EQ(VoiceFor(cfg, 3, 3, Condition::kImitation), voices[2]);
  EXPECT_EQ(VoiceFor(cfg, 3, 0, Condition::kInteractive), voices[0]);
  EXPECT_EQ(VoiceFor(cfg, 3, 1, Condition::kSolo), voices[1]);
  cfg.lambda = 0.5;
  const VoiceProfile mid = VoiceFor(cfg, 3, 1, Condition::kInteractive);
  EXPECT_DOUBLE_EQ(mid.f0, 0.5 * (voices[0].f0 + voices[1].f0));
}

TEST(SynthTest, VoicesDiffer) {
  const auto voices = SpeakerVoices(Small(), 1);
  for (std::size_t i = 0; i < voices.size(); ++i) {
    for (std::size_t j = i + 1; j < voices.size(); ++j) EXPECT_FALSE(voices[i] == voices[j]);
  }
}

TEST(SynthTest, UtteranceSynthesisIsDeterministic) {
  const SynthConfig cfg = Small();
  const UtteranceKey key{"S1", Condition::kInteractive, 2, 3};
  const auto a = SynthesizeUtterance(cfg, 5, key, 1);
  EXPECT_EQ(a, SynthesizeUtterance(cfg, 5, key, 1));
  EXPECT_NE(a, SynthesizeUtterance(cfg, 6, key, 1));
  EXPECT_GE(a.size(), 400u);
}

TEST(SynthTest, ManifestLayout) {
  const CorpusManifest m = SyntheticManifest(Small());
  EXPECT_EQ(m.speakers.size(), 4u);
  EXPECT_EQ(m.dyads.size(), 2u);
  EXPECT_EQ(m.script_length, 4);
  // 16 solo + 2 dyads x (2 + 1) sessions x 4 sentences.
  EXPECT_EQ(m.utterances.size(), 16u + 24u);
  EXPECT_EQ(SessionsOf(m, Condition::kInteractive), (std::vector<int>{1, 2}));
}

TEST(SynthTest, SameSeedGivesByteIdenticalFiles) {
  testing::TempDir dir;
  const SynthConfig cfg = Small();
  const CorpusManifest a = GenerateSyntheticCorpus(cfg, 9, dir.path() / "a");
  const CorpusManifest b = GenerateSyntheticCorpus(cfg, 9, dir.path() / "b");
  ASSERT_EQ(a.utterances.size(), b.utterances.size());
  for (std::size_t i = 0; i < a.utterances.size(); ++i) {
    const std::string x = Slurp(a.utterances[i].audio_path);
    EXPECT_FALSE(x.empty());
    EXPECT_EQ(x, Slurp(b.utterances[i].audio_path));
  }
  const CorpusManifest loaded = LoadManifest(dir.path() / "a" / "manifest.json");
  EXPECT_EQ(loaded.utterances.size(), a.utterances.size());
  const Waveform w = LoadAudio(a.utterances[0].audio_path);
  EXPECT_EQ(w.sample_rate, 16000);
  EXPECT_GT(w.samples.size(), 400u);
}

}  // namespace
}  // namespace artconv
