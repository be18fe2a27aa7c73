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

#ifndef ARTCONV_WAV_H_
#define ARTCONV_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace artconv {

// Sample rate every waveform is brought to before feature extraction.
inline constexpr int kPipelineSampleRate = 16000;

// Mono audio, amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kPipelineSampleRate;
};

// Raw decoded PCM before any conversion: interleaved channels.
struct PcmData {
  std::vector<double> interleaved;
  int channels = 1;
  int sample_rate = kPipelineSampleRate;
};

// Decodes a RIFF/WAVE file holding 16-bit integer or 32-bit float PCM.
PcmData ReadWav(const std::filesystem::path& path);
PcmData DecodeWav(std::span<const std::uint8_t> bytes);

// Writes mono 16-bit PCM; samples are clipped to [-1, 1].
void WriteWav16(const std::filesystem::path& path,
                std::span<const double> samples, int sample_rate);
// Writes interleaved 32-bit float PCM.
void WriteWavFloat(const std::filesystem::path& path,
                   std::span<const double> interleaved, int channels,
                   int sample_rate);

// Averages channels to mono.
std::vector<double> DownmixToMono(const PcmData& pcm);

// Linear-interpolation resampler. N input samples at `from_rate` give
// floor((N - 1) * to_rate / from_rate) + 1 output samples; the first and
// last input samples are hit exactly when the ratio divides evenly.
std::vector<double> ResampleLinear(std::span<const double> samples,
                                   int from_rate, int to_rate);

// ReadWav + downmix + resample to 16 kHz. Throws DataError on unsupported
// encodings and on zero-length audio.
Waveform LoadAudio(const std::filesystem::path& path);
Waveform ToPipelineWaveform(const PcmData& pcm);

}  // namespace artconv

#endif  // ARTCONV_WAV_H_
