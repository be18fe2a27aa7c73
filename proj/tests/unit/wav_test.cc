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

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "artconv/error.h"
#include "test_util.h"

namespace artconv {
namespace {

TEST(WavTest, Pcm16RoundTrip) {
  testing::TempDir dir;
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * i) * 0.8;
  WriteWav16(dir.path() / "a.wav", x, 16000);
  const PcmData pcm = ReadWav(dir.path() / "a.wav");
  EXPECT_EQ(pcm.channels, 1);
  EXPECT_EQ(pcm.sample_rate, 16000);
  ASSERT_EQ(pcm.interleaved.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(pcm.interleaved[i], x[i], 0.5 / 32768);
}

TEST(WavTest, FloatRoundTripIsExactForFloatValues) {
  testing::TempDir dir;
  const std::vector<double> x = {0.5, -0.25, 0.125, -1.0, 0.0, 0.75};
  WriteWavFloat(dir.path() / "f.wav", x, 2, 8000);
  const PcmData pcm = ReadWav(dir.path() / "f.wav");
  EXPECT_EQ(pcm.channels, 2);
  EXPECT_EQ(pcm.sample_rate, 8000);
  EXPECT_EQ(pcm.interleaved, x);
}

TEST(WavTest, AntiphaseStereoDownmixesToSilence) {
  PcmData pcm;
  pcm.channels = 2;
  for (int i = 0; i < 100; ++i) {
    const double v = std::sin(0.1 * i) * 0.5;
    pcm.interleaved.push_back(v);
    pcm.interleaved.push_back(-v);
  }
  const std::vector<double> mono = DownmixToMono(pcm);
  ASSERT_EQ(mono.size(), 100u);
  for (double v : mono) EXPECT_EQ(v, 0.0);
}

TEST(WavTest, UpsamplingDoublesLength) {
  std::vector<double> x(800);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto y = ResampleLinear(x, 8000, 16000);
  EXPECT_EQ(y.size(), 2 * x.size() - 1);
  EXPECT_DOUBLE_EQ(y[1], 0.5);
  EXPECT_DOUBLE_EQ(y[2], 1.0);
  PcmData pcm;
  pcm.sample_rate = 8000;
  pcm.interleaved = x;
  EXPECT_EQ(ToPipelineWaveform(pcm).sample_rate, kPipelineSampleRate);
}

TEST(WavTest, ZeroLengthAudioIsAnError) {
  testing::TempDir dir;
  WriteWav16(dir.path() / "empty.wav", {}, 16000);
  try {
    LoadAudio(dir.path() / "empty.wav");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zero-length audio"), std::string::npos);
  }
}

TEST(WavTest, UnsupportedCodecIsAnError) {
  testing::TempDir dir;
  WriteWav16(dir.path() / "a.wav", std::vector<double>(10, 0.1), 16000);
  std::vector<std::uint8_t> bytes;
  {
    std::ifstream in(dir.path() / "a.wav", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[20] = 6;  // A-law
  try {
    DecodeWav(bytes);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported codec"), std::string::npos);
  }
  const std::vector<std::uint8_t> junk = {'J', 'U', 'N', 'K'};
  EXPECT_THROW(DecodeWav(junk), DataError);
}

}  // namespace
}  // namespace artconv
