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

#ifndef ARTCONV_DSP_H_
#define ARTCONV_DSP_H_

#include <span>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "artconv/wav.h"

namespace artconv {

inline constexpr int kStaticCoefficients = 13;
inline constexpr int kFeatureDim = 3 * kStaticCoefficients;  // static | Δ | ΔΔ

using FrameMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One utterance: rows are frames, columns are feature dimensions.
struct FeatureMatrix {
  FrameMatrix frames;
  double frame_hop = 0.010;     // seconds
  double frame_window = 0.025;  // seconds

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }
};

struct MfccConfig {
  int sample_rate = kPipelineSampleRate;
  int window_samples = 400;  // 25 ms
  int hop_samples = 160;     // 10 ms
  int fft_size = 512;
  int num_mel_filters = 40;
  double low_freq = 0.0;
  double high_freq = 8000.0;
  int num_ceps = kStaticCoefficients;  // c0..c12
  double preemphasis = 0.97;
  double log_floor = 1e-10;
  int delta_window = 4;  // regression half-width
  bool apply_cmvn = true;

  void Check() const;
};

void to_json(nlohmann::json& j, const MfccConfig& cfg);
void from_json(const nlohmann::json& j, MfccConfig& cfg);

// 1 + floor((num_samples - window) / hop), or 0 when the signal is shorter
// than one window.
int FrameCount(long num_samples, int window_samples, int hop_samples);

// Precomputes the window, mel filterbank and DCT for one configuration.
// Thread-safe after construction.
class MfccExtractor {
 public:
  explicit MfccExtractor(const MfccConfig& cfg = {});

  // Static coefficients only: pre-emphasis, Hann window, power spectrum,
  // triangular mel filterbank, log, orthonormal DCT-II.
  FeatureMatrix Compute(std::span<const double> samples) const;

  const MfccConfig& config() const { return cfg_; }
  // num_mel_filters x (fft_size/2 + 1)
  const Eigen::MatrixXd& filterbank() const { return filterbank_; }

 private:
  MfccConfig cfg_;
  Eigen::VectorXd window_;
  Eigen::MatrixXd filterbank_;
  Eigen::MatrixXd dct_;
};

FeatureMatrix ComputeMfcc(const Waveform& w, const MfccConfig& cfg = {});

// [static | Δ | ΔΔ] with the regression delta over ±half_width frames,
// edge frames replicated. Throws DataError unless the input has 13 columns.
FeatureMatrix AppendDeltas(const FeatureMatrix& f, int half_width = 4);

// Per-utterance mean/variance normalization with population statistics.
// Columns whose standard deviation is below 1e-10 are only mean-subtracted.
FeatureMatrix Cmvn(const FeatureMatrix& f);

// Full front end: MFCC -> deltas -> optional CMVN.
FeatureMatrix ExtractFeatures(const Waveform& w, const MfccExtractor& extractor);

}  // namespace artconv

#endif  // ARTCONV_DSP_H_
