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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "artconv/error.h"
#include "artconv/parallel.h"
#include "artconv/wav.h"

namespace artconv {

namespace fs = std::filesystem;

namespace {

// Vowel-like phone inventory: F1..F4 in Hz for an average adult voice.
constexpr std::array<std::array<double, 4>, kSynthPhones> kPhoneFormants = {{
    {270, 2290, 3010, 3700},
    {390, 1990, 2550, 3600},
    {530, 1840, 2480, 3500},
    {660, 1720, 2410, 3500},
    {730, 1090, 2440, 3400},
    {570, 840, 2410, 3300},
    {440, 1020, 2240, 3300},
    {300, 870, 2240, 3300},
}};
constexpr std::array<double, 4> kBaseBandwidth = {60, 90, 120, 160};

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t Mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ull;
  for (std::uint64_t p : parts) h = SplitMix(h ^ SplitMix(p));
  return h;
}

std::string SpeakerId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "S%02d", index + 1);
  return buf;
}

std::string DyadId(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "D%02d", index + 1);
  return buf;
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Two-pole resonance with unit gain at DC.
class Resonator {
 public:
  Resonator() = default;
  Resonator(double freq, double bandwidth, double fs) {
    const double r = std::exp(-std::numbers::pi * bandwidth / fs);
    a1_ = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs);
    a2_ = -r * r;
    gain_ = 1.0 - a1_ - a2_;
  }
  double Step(double x) {
    const double y = gain_ * x + a1_ * y1_ + a2_ * y2_;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double a1_ = 0.0, a2_ = 0.0, gain_ = 1.0, y1_ = 0.0, y2_ = 0.0;
};

struct PhoneSegment {
  int phone;
  double duration;  // relative units, scaled by phone_ms and tempo
  double amplitude;
};

// Sentence "text": the phone sequence is shared by every speaker.
std::vector<PhoneSegment> SentencePhones(const SynthConfig& cfg,
                                         std::uint64_t seed, int sentence) {
  std::mt19937_64 rng(Mix({seed, 0x5E47E7CEull, static_cast<std::uint64_t>(sentence)}));
  std::vector<PhoneSegment> phones;
  int previous = -1;
  for (int i = 0; i < cfg.phones_per_sentence; ++i) {
    int phone;
    do {
      phone = static_cast<int>(rng() % kPhoneFormants.size());
    } while (phone == previous);
    previous = phone;
    phones.push_back({phone, Uniform(rng, 0.7, 1.3), Uniform(rng, 0.6, 1.0)});
  }
  return phones;
}

}  // namespace

void SynthConfig::Check() const {
  if (speakers < 2 || speakers % 2 != 0) {
    throw DataError("synthetic corpus needs an even, positive speaker count");
  }
  if (sentences < 1 || sentences > kScriptSentences) {
    throw DataError("sentences must lie in [1, 80]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DataError("lambda must lie in [0, 1]");
  }
  if (sample_rate < 8000) throw DataError("sample_rate below 8 kHz");
  if (interactive_sessions < 0 || imitation_sessions < 0) {
    throw DataError("session counts must be non-negative");
  }
  if (phones_per_sentence < 1 || !(phone_ms >= 20.0)) {
    throw DataError("utterances need at least one phone of >= 20 ms");
  }
}

void to_json(nlohmann::json& j, const SynthConfig& cfg) {
  j = {{"speakers", cfg.speakers},
       {"sentences", cfg.sentences},
       {"sample_rate", cfg.sample_rate},
       {"lambda", cfg.lambda},
       {"interactive_sessions", cfg.interactive_sessions},
       {"imitation_sessions", cfg.imitation_sessions},
       {"phones_per_sentence", cfg.phones_per_sentence},
       {"phone_ms", cfg.phone_ms}};
}

void from_json(const nlohmann::json& j, SynthConfig& cfg) {
  const SynthConfig d;
  cfg.speakers = j.value("speakers", d.speakers);
  cfg.sentences = j.value("sentences", d.sentences);
  cfg.sample_rate = j.value("sample_rate", d.sample_rate);
  cfg.lambda = j.value("lambda", d.lambda);
  cfg.interactive_sessions = j.value("interactive_sessions", d.interactive_sessions);
  cfg.imitation_sessions = j.value("imitation_sessions", d.imitation_sessions);
  cfg.phones_per_sentence = j.value("phones_per_sentence", d.phones_per_sentence);
  cfg.phone_ms = j.value("phone_ms", d.phone_ms);
}

VoiceProfile Interpolate(const VoiceProfile& own, const VoiceProfile& target,
                         double lambda) {
  auto lerp = [lambda](double a, double b) { return (1.0 - lambda) * a + lambda * b; };
  if (lambda == 0.0) return own;
  if (lambda == 1.0) return target;
  VoiceProfile v;
  v.f0 = lerp(own.f0, target.f0);
  v.formant_scale = lerp(own.formant_scale, target.formant_scale);
  for (std::size_t p = 0; p < v.vowel_shift.size(); ++p) {
    for (std::size_t i = 0; i < 4; ++i) {
      v.vowel_shift[p][i] = lerp(own.vowel_shift[p][i], target.vowel_shift[p][i]);
    }
  }
  v.bandwidth_scale = lerp(own.bandwidth_scale, target.bandwidth_scale);
  v.breathiness = lerp(own.breathiness, target.breathiness);
  v.tilt = lerp(own.tilt, target.tilt);
  v.tempo = lerp(own.tempo, target.tempo);
  for (std::size_t i = 0; i < v.timbre_hz.size(); ++i) {
    v.timbre_hz[i] = lerp(own.timbre_hz[i], target.timbre_hz[i]);
  }
  return v;
}

std::vector<VoiceProfile> SpeakerVoices(const SynthConfig& cfg,
                                        std::uint64_t seed) {
  cfg.Check();
  const int n = cfg.speakers;
  std::mt19937_64 rng(Mix({seed, 0x70CA1ull}));
  // Stratified vocal tract length, pitch and resonances.
  auto ranks = [&] {
    std::vector<int> r(static_cast<std::size_t>(n));
    std::iota(r.begin(), r.end(), 0);
    std::shuffle(r.begin(), r.end(), rng);
    return r;
  };
  const std::vector<int> scale_rank = ranks();
  const std::vector<int> pitch_rank = ranks();
  const std::vector<int> low_rank = ranks();
  const std::vector<int> high_rank = ranks();
  std::normal_distribution<double> offset(0.0, 1.0);

  std::vector<VoiceProfile> voices(n);
  for (int i = 0; i < n; ++i) {
    VoiceProfile& v = voices[i];
    v.formant_scale = 0.82 + 0.36 * (scale_rank[i] + Uniform(rng, 0.2, 0.8)) / n;
    v.f0 = 90.0 + 150.0 * (pitch_rank[i] + Uniform(rng, 0.2, 0.8)) / n;
    for (auto& phone : v.vowel_shift) {
      for (std::size_t f = 0; f < phone.size(); ++f) {
        phone[f] = std::clamp(offset(rng) * (f < 2 ? 0.10 : 0.06), -0.25, 0.25);
      }
    }
    v.bandwidth_scale = Uniform(rng, 0.8, 1.4);
    v.breathiness = Uniform(rng, 0.02, 0.25);
    v.tilt = Uniform(rng, 0.80, 0.97);
    v.tempo = Uniform(rng, 0.85, 1.15);
    v.timbre_hz[0] = 1200.0 + 1600.0 * (low_rank[i] + Uniform(rng, 0.3, 0.7)) / n;
    v.timbre_hz[1] = 3200.0 + 2400.0 * (high_rank[i] + Uniform(rng, 0.3, 0.7)) / n;
  }
  return voices;
}

VoiceProfile VoiceFor(const SynthConfig& cfg, std::uint64_t seed,
                      int speaker_index, Condition condition) {
  const std::vector<VoiceProfile> voices = SpeakerVoices(cfg, seed);
  const VoiceProfile& own = voices.at(static_cast<std::size_t>(speaker_index));
  const bool converges = speaker_index % 2 == 1;
  if (condition == Condition::kSolo || !converges) return own;
  return Interpolate(own, voices[static_cast<std::size_t>(speaker_index - 1)],
                     cfg.lambda);
}

CorpusManifest SyntheticManifest(const SynthConfig& cfg) {
  cfg.Check();
  CorpusManifest manifest;
  manifest.script_length = cfg.sentences;
  for (int i = 0; i < cfg.speakers; ++i) {
    SpeakerRecord s;
    s.id = SpeakerId(i);
    s.attributes = {{"role", i % 2 == 0 ? "anchor" : "converger"}};
    manifest.speakers.push_back(std::move(s));
  }
  for (int d = 0; d < cfg.speakers / 2; ++d) {
    manifest.dyads.push_back({DyadId(d), SpeakerId(2 * d), SpeakerId(2 * d + 1)});
  }
  auto add = [&](int speaker, Condition condition, int session, int sentence) {
    UtteranceRecord u;
    u.speaker_id = SpeakerId(speaker);
    u.dyad_id = DyadId(speaker / 2);
    u.condition = condition;
    u.session = session;
    u.sentence_index = sentence;
    manifest.utterances.push_back(std::move(u));
  };
  for (int s = 0; s < cfg.speakers; ++s) {
    for (int k = 1; k <= cfg.sentences; ++k) add(s, Condition::kSolo, 1, k);
  }
  auto alternate = [&](Condition condition, int sessions) {
    for (int d = 0; d < cfg.speakers / 2; ++d) {
      for (int session = 1; session <= sessions; ++session) {
        const bool first_opens = session <= (sessions + 1) / 2;
        const int opener = first_opens ? 2 * d : 2 * d + 1;
        const int partner = first_opens ? 2 * d + 1 : 2 * d;
        for (int k = 1; k <= cfg.sentences; ++k) {
          add(k % 2 == 1 ? opener : partner, condition, session, k);
        }
      }
    }
  };
  alternate(Condition::kInteractive, cfg.interactive_sessions);
  alternate(Condition::kImitation, cfg.imitation_sessions);
  manifest.Validate();
  return manifest;
}

std::vector<double> SynthesizeUtterance(const SynthConfig& cfg,
                                        std::uint64_t seed,
                                        const UtteranceKey& key,
                                        int speaker_index) {
  const VoiceProfile voice = VoiceFor(cfg, seed, speaker_index, key.condition);
  const std::vector<PhoneSegment> phones = SentencePhones(cfg, seed, key.sentence_index);
  std::mt19937_64 rng(Mix({seed, static_cast<std::uint64_t>(speaker_index),
                           static_cast<std::uint64_t>(key.condition),
                           static_cast<std::uint64_t>(key.session),
                           static_cast<std::uint64_t>(key.sentence_index)}));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double fs = cfg.sample_rate;

  // Phone boundaries in samples.
  std::vector<long> ends;
  long total = 0;
  for (const PhoneSegment& p : phones) {
    total += std::lround(p.duration * cfg.phone_ms * 1e-3 * fs * voice.tempo);
    ends.push_back(total);
  }

  auto targets = [&](int phone) {
    std::array<double, 4> f{};
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = std::clamp(kPhoneFormants[phone][i] * voice.formant_scale *
                            (1.0 + voice.vowel_shift[phone][i]),
                        150.0, 0.45 * fs);
    }
    return f;
  };

  std::array<double, 4> formant = targets(phones.front().phone);
  std::array<double, 4> y1{}, y2{};
  std::array<double, 4> a1{}, a2{}, gain{};
  const double smooth = 1.0 - std::exp(-1.0 / (0.015 * fs));  // 15 ms glide
  const double intonation_phase = Uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double jitter = 0.01;
  double phase = Uniform(rng, 0.0, 1.0);
  double glottal = 0.0;
  double amplitude = phones.front().amplitude;

  std::array<Resonator, 2> timbre;
  for (std::size_t i = 0; i < timbre.size(); ++i) {
    timbre[i] = Resonator(voice.timbre_hz[i], 250.0 * voice.bandwidth_scale, fs);
  }

  std::vector<double> out(static_cast<std::size_t>(total));
  std::size_t segment = 0;
  for (long n = 0; n < total; ++n) {
    while (segment + 1 < phones.size() && n >= ends[segment]) ++segment;
    const double t = n / fs;
    const std::array<double, 4> target = targets(phones[segment].phone);
    for (std::size_t i = 0; i < 4; ++i) formant[i] += smooth * (target[i] - formant[i]);
    amplitude += smooth * (phones[segment].amplitude - amplitude);

    if (n % 32 == 0) {
      for (std::size_t i = 0; i < 4; ++i) {
        const double bw = kBaseBandwidth[i] * voice.bandwidth_scale;
        const double r = std::exp(-std::numbers::pi * bw / fs);
        a1[i] = 2.0 * r * std::cos(2.0 * std::numbers::pi * formant[i] / fs);
        a2[i] = -r * r;
        gain[i] = 1.0 - r;
      }
    }

    // Declining pitch with slow intonation and cycle jitter.
    const double progress = static_cast<double>(n) / total;
    const double f0 = voice.f0 * (1.08 - 0.16 * progress) *
                      (1.0 + 0.04 * std::sin(2.0 * std::numbers::pi * 2.5 * t +
                                             intonation_phase));
    phase += f0 / fs;
    double pulse = 0.0;
    if (phase >= 1.0) {
      phase -= 1.0;
      phase += jitter * gauss(rng) * 0.1;
      pulse = 1.0;
    }
    glottal = voice.tilt * glottal + (1.0 - voice.tilt) * pulse * 40.0;
    double x = glottal + voice.breathiness * 0.3 * gauss(rng);
    for (std::size_t i = 0; i < 4; ++i) {
      const double y = gain[i] * x + a1[i] * y1[i] + a2[i] * y2[i];
      y2[i] = y1[i];
      y1[i] = y;
      x = y;
    }
    for (std::size_t i = 0; i < timbre.size(); ++i) x = timbre[i].Step(x);
    out[static_cast<std::size_t>(n)] = amplitude * x;
  }

  // 10 ms fades and peak normalization over a faint noise floor.
  const long fade = std::min<long>(static_cast<long>(0.01 * fs), total / 2);
  for (long n = 0; n < fade; ++n) {
    const double g = static_cast<double>(n) / fade;
    out[static_cast<std::size_t>(n)] *= g;
    out[static_cast<std::size_t>(total - 1 - n)] *= g;
  }
  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? 0.5 / peak : 0.0;
  for (double& v : out) v = v * scale + 1e-4 * gauss(rng);
  return out;
}

CorpusManifest GenerateSyntheticCorpus(const SynthConfig& cfg,
                                       std::uint64_t seed,
                                       const fs::path& out_dir) {
  CorpusManifest manifest = SyntheticManifest(cfg);
  const fs::path audio_dir = out_dir / "audio";
  fs::create_directories(audio_dir);
  std::map<std::string, int> speaker_index;
  for (int i = 0; i < cfg.speakers; ++i) speaker_index[SpeakerId(i)] = i;
  for (UtteranceRecord& u : manifest.utterances) {
    const std::string name = u.speaker_id + "_" + std::string(ToString(u.condition)) +
                             "_s" + std::to_string(u.session) + "_" +
                             std::to_string(u.sentence_index) + ".wav";
    u.audio_path = fs::absolute(audio_dir / name).lexically_normal().string();
  }
  ParallelFor(manifest.utterances.size(), [&](std::size_t i) {
    const UtteranceRecord& u = manifest.utterances[i];
    const std::vector<double> samples =
        SynthesizeUtterance(cfg, seed, u.key(), speaker_index.at(u.speaker_id));
    WriteWav16(u.audio_path, samples, cfg.sample_rate);
  });
  SaveManifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace artconv
