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

#include "artconv/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "artconv/error.h"

namespace artconv {

static_assert(std::endian::native == std::endian::little,
              "WAV and feature I/O assume a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLE(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) throw DataError("truncated WAV header");
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void AppendLE(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

void AppendTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::vector<std::uint8_t> WavHeader(std::uint16_t format, int channels,
                                    int sample_rate, int bits,
                                    std::uint32_t data_bytes) {
  std::vector<std::uint8_t> out;
  AppendTag(out, "RIFF");
  AppendLE<std::uint32_t>(out, 36 + data_bytes);
  AppendTag(out, "WAVE");
  AppendTag(out, "fmt ");
  AppendLE<std::uint32_t>(out, 16);
  AppendLE<std::uint16_t>(out, format);
  AppendLE<std::uint16_t>(out, static_cast<std::uint16_t>(channels));
  AppendLE<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
  AppendLE<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate * channels * bits / 8));
  AppendLE<std::uint16_t>(out, static_cast<std::uint16_t>(channels * bits / 8));
  AppendLE<std::uint16_t>(out, static_cast<std::uint16_t>(bits));
  AppendTag(out, "data");
  AppendLE<std::uint32_t>(out, data_bytes);
  return out;
}

void WriteBytes(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace

PcmData DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t size = ReadLE<std::uint32_t>(bytes, pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (size < 16) throw DataError("malformed fmt chunk");
      format = ReadLE<std::uint16_t>(bytes, body);
      channels = ReadLE<std::uint16_t>(bytes, body + 2);
      sample_rate = ReadLE<std::uint32_t>(bytes, body + 4);
      bits = ReadLE<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible && size >= 26) {
        format = ReadLE<std::uint16_t>(bytes, body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      // Streams sometimes leave the size unset; clamp to what is present.
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw DataError("WAV without fmt chunk");
  if (!have_data) throw DataError("WAV without data chunk");
  if (channels == 0 || sample_rate == 0) throw DataError("malformed fmt chunk");

  PcmData pcm;
  pcm.channels = channels;
  pcm.sample_rate = static_cast<int>(sample_rate);
  if (format == kFormatPcm && bits == 16) {
    const std::size_t n = data.size() / 2;
    pcm.interleaved.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::int16_t v;
      std::memcpy(&v, data.data() + 2 * i, 2);
      pcm.interleaved[i] = v / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t n = data.size() / 4;
    pcm.interleaved.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, data.data() + 4 * i, 4);
      pcm.interleaved[i] = std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
  } else {
    throw DataError("unsupported codec: format " + std::to_string(format) +
                    " with " + std::to_string(bits) + " bits per sample");
  }
  pcm.interleaved.resize(pcm.interleaved.size() -
                         pcm.interleaved.size() % channels);
  return pcm;
}

PcmData ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open audio " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteWav16(const std::filesystem::path& path,
                std::span<const double> samples, int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out = WavHeader(kFormatPcm, 1, sample_rate, 16, data_bytes);
  out.reserve(out.size() + data_bytes);
  for (double s : samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    AppendLE<std::int16_t>(out, static_cast<std::int16_t>(scaled));
  }
  WriteBytes(path, out);
}

void WriteWavFloat(const std::filesystem::path& path,
                   std::span<const double> interleaved, int channels,
                   int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 4);
  std::vector<std::uint8_t> out =
      WavHeader(kFormatFloat, channels, sample_rate, 32, data_bytes);
  for (double s : interleaved) AppendLE<float>(out, static_cast<float>(s));
  WriteBytes(path, out);
}

std::vector<double> DownmixToMono(const PcmData& pcm) {
  const std::size_t frames = pcm.interleaved.size() / pcm.channels;
  std::vector<double> mono(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (int c = 0; c < pcm.channels; ++c) sum += pcm.interleaved[i * pcm.channels + c];
    mono[i] = sum / pcm.channels;
  }
  return mono;
}

std::vector<double> ResampleLinear(std::span<const double> samples,
                                   int from_rate, int to_rate) {
  if (samples.empty() || from_rate == to_rate) {
    return {samples.begin(), samples.end()};
  }
  const auto n = static_cast<std::int64_t>(samples.size());
  const std::int64_t out_len = (n - 1) * to_rate / from_rate + 1;
  std::vector<double> out(static_cast<std::size_t>(out_len));
  for (std::int64_t i = 0; i < out_len; ++i) {
    // Exact integer source position.
    const std::int64_t num = i * from_rate;
    const std::int64_t idx = num / to_rate;
    const double frac = static_cast<double>(num % to_rate) / to_rate;
    const double a = samples[static_cast<std::size_t>(idx)];
    const double b = idx + 1 < n ? samples[static_cast<std::size_t>(idx + 1)] : a;
    out[static_cast<std::size_t>(i)] = a + frac * (b - a);
  }
  return out;
}

Waveform ToPipelineWaveform(const PcmData& pcm) {
  std::vector<double> mono = DownmixToMono(pcm);
  if (mono.empty()) throw DataError("zero-length audio");
  Waveform w;
  w.samples = ResampleLinear(mono, pcm.sample_rate, kPipelineSampleRate);
  w.sample_rate = kPipelineSampleRate;
  return w;
}

Waveform LoadAudio(const std::filesystem::path& path) {
  PcmData pcm = ReadWav(path);
  if (pcm.interleaved.empty()) {
    throw DataError(path.string() + ": zero-length audio");
  }
  return ToPipelineWaveform(pcm);
}

}  // namespace artconv
