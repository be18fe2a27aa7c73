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

#ifndef ARTCONV_SYNTH_H_
#define ARTCONV_SYNTH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "artconv/corpus.h"

namespace artconv {

// Desk-scale stand-in for a recorded reading corpus. Speakers come in
// dyads (S01,S02), (S03,S04), ...; the second member of each dyad is the
// one who converges toward the first in the interactive and imitation
// conditions.
struct SynthConfig {
  int speakers = 4;        // even
  int sentences = 20;      // script length, <= 80
  int sample_rate = 16000;
  double lambda = 0.0;     // convergence of the second dyad member, [0, 1]
  int interactive_sessions = 4;
  int imitation_sessions = 2;
  int phones_per_sentence = 8;
  double phone_ms = 80.0;

  void Check() const;
};

void to_json(nlohmann::json& j, const SynthConfig& cfg);
void from_json(const nlohmann::json& j, SynthConfig& cfg);

inline constexpr int kSynthPhones = 8;

// Vocal-tract and source parameters of one synthetic voice. Every field
// interpolates linearly.
struct VoiceProfile {
  double f0 = 120.0;                 // Hz
  double formant_scale = 1.0;        // vocal tract length factor
  // Relative deviation of each phone's F1..F4 targets from the average
  // voice: the speaker's own vowel qualities.
  std::array<std::array<double, 4>, kSynthPhones> vowel_shift{};
  double bandwidth_scale = 1.0;
  double breathiness = 0.1;
  double tilt = 0.9;                 // glottal one-pole coefficient
  double tempo = 1.0;                // phone duration multiplier
  // Fixed speaker resonances on top of the phone formants.
  std::array<double, 2> timbre_hz{1800.0, 4200.0};

  bool operator==(const VoiceProfile&) const = default;
};

// (1 - lambda) * own + lambda * target.
VoiceProfile Interpolate(const VoiceProfile& own, const VoiceProfile& target,
                         double lambda);

// Base voices of all speakers, indexed like the manifest's speaker list.
std::vector<VoiceProfile> SpeakerVoices(const SynthConfig& cfg,
                                        std::uint64_t seed);

// Voice a speaker uses in a condition: solo is always the base voice; the
// second dyad member moves toward the partner by lambda otherwise.
VoiceProfile VoiceFor(const SynthConfig& cfg, std::uint64_t seed,
                      int speaker_index, Condition condition);

// Metadata-only manifest with the layout the generator produces:
//   solo: session 1, every sentence, every speaker
//   interactive: sessions 1..n; sessions in the first half are opened by the
//     first dyad member, the rest by the second; the opener reads odd
//     sentences, the partner even ones
//   imitation: same alternation over its own sessions
CorpusManifest SyntheticManifest(const SynthConfig& cfg);

// Waveform of one utterance, a pure function of its arguments.
std::vector<double> SynthesizeUtterance(const SynthConfig& cfg,
                                        std::uint64_t seed,
                                        const UtteranceKey& key,
                                        int speaker_index);

// Writes one 16-bit WAV per utterance under out_dir/audio plus
// out_dir/manifest.json and returns the manifest. Identical (cfg, seed)
// give byte-identical files.
CorpusManifest GenerateSyntheticCorpus(const SynthConfig& cfg,
                                       std::uint64_t seed,
                                       const std::filesystem::path& out_dir);

}  // namespace artconv

#endif  // ARTCONV_SYNTH_H_
