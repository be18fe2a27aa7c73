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

#include "artconv/dsp.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "artconv/error.h"

namespace artconv {

namespace {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

void MfccConfig::Check() const {
  auto fail = [](const std::string& what) { throw DataError("mfcc config: " + what); };
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (window_samples <= 0 || hop_samples <= 0) fail("window and hop must be positive");
  if (fft_size < window_samples) fail("fft_size smaller than the window");
  if ((fft_size & (fft_size - 1)) != 0) fail("fft_size must be a power of two");
  if (num_mel_filters < 1) fail("need at least one mel filter");
  if (num_ceps < 1 || num_ceps > num_mel_filters) fail("num_ceps outside [1, num_mel_filters]");
  if (!(low_freq >= 0.0 && low_freq < high_freq && high_freq <= sample_rate / 2.0)) {
    fail("mel band must satisfy 0 <= low < high <= nyquist");
  }
  if (!(log_floor > 0.0)) fail("log_floor must be positive");
  if (delta_window < 1) fail("delta_window must be >= 1");
}

void to_json(nlohmann::json& j, const MfccConfig& cfg) {
  j = {{"sample_rate", cfg.sample_rate},
       {"window_samples", cfg.window_samples},
       {"hop_samples", cfg.hop_samples},
       {"fft_size", cfg.fft_size},
       {"num_mel_filters", cfg.num_mel_filters},
       {"low_freq", cfg.low_freq},
       {"high_freq", cfg.high_freq},
       {"num_ceps", cfg.num_ceps},
       {"preemphasis", cfg.preemphasis},
       {"log_floor", cfg.log_floor},
       {"delta_window", cfg.delta_window},
       {"apply_cmvn", cfg.apply_cmvn}};
}

void from_json(const nlohmann::json& j, MfccConfig& cfg) {
  const MfccConfig d;
  cfg.sample_rate = j.value("sample_rate", d.sample_rate);
  cfg.window_samples = j.value("window_samples", d.window_samples);
  cfg.hop_samples = j.value("hop_samples", d.hop_samples);
  cfg.fft_size = j.value("fft_size", d.fft_size);
  cfg.num_mel_filters = j.value("num_mel_filters", d.num_mel_filters);
  cfg.low_freq = j.value("low_freq", d.low_freq);
  cfg.high_freq = j.value("high_freq", d.high_freq);
  cfg.num_ceps = j.value("num_ceps", d.num_ceps);
  cfg.preemphasis = j.value("preemphasis", d.preemphasis);
  cfg.log_floor = j.value("log_floor", d.log_floor);
  cfg.delta_window = j.value("delta_window", d.delta_window);
  cfg.apply_cmvn = j.value("apply_cmvn", d.apply_cmvn);
}

int FrameCount(long num_samples, int window_samples, int hop_samples) {
  if (num_samples < window_samples) return 0;
  return 1 + static_cast<int>((num_samples - window_samples) / hop_samples);
}

MfccExtractor::MfccExtractor(const MfccConfig& cfg) : cfg_(cfg) {
  cfg_.Check();
  const int n = cfg_.window_samples;
  // Periodic Hann.
  window_.resize(n);
  for (int i = 0; i < n; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }

  const int bins = cfg_.fft_size / 2 + 1;
  const int m = cfg_.num_mel_filters;
  const double mel_lo = HzToMel(cfg_.low_freq);
  const double mel_hi = HzToMel(cfg_.high_freq);
  std::vector<double> edges(m + 2);
  for (int i = 0; i < m + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (m + 1));
  }
  filterbank_ = Eigen::MatrixXd::Zero(m, bins);
  for (int f = 0; f < m; ++f) {
    const double left = edges[f], center = edges[f + 1], right = edges[f + 2];
    for (int k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * cfg_.sample_rate / cfg_.fft_size;
      const double rise = (hz - left) / (center - left);
      const double fall = (right - hz) / (right - center);
      filterbank_(f, k) = std::max(0.0, std::min(rise, fall));
    }
  }

  dct_.resize(cfg_.num_ceps, m);
  for (int k = 0; k < cfg_.num_ceps; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / m);
    for (int j = 0; j < m; ++j) {
      dct_(k, j) = scale * std::cos(std::numbers::pi * k * (j + 0.5) / m);
    }
  }
}

FeatureMatrix MfccExtractor::Compute(std::span<const double> samples) const {
  const long num_samples = static_cast<long>(samples.size());
  const int frames = FrameCount(num_samples, cfg_.window_samples, cfg_.hop_samples);
  if (frames < 1) {
    throw DataError("audio shorter than one analysis window (" +
                    std::to_string(num_samples) + " < " +
                    std::to_string(cfg_.window_samples) + " samples)");
  }

  std::vector<double> emphasized(samples.size());
  emphasized[0] = samples[0];
  for (std::size_t i = 1; i < samples.size(); ++i) {
    emphasized[i] = samples[i] - cfg_.preemphasis * samples[i - 1];
  }

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buffer(cfg_.fft_size, 0.0);
  std::vector<std::complex<double>> spectrum;
  const int bins = cfg_.fft_size / 2 + 1;
  Eigen::VectorXd power(bins);

  FeatureMatrix out;
  out.frames.resize(frames, cfg_.num_ceps);
  out.frame_hop = static_cast<double>(cfg_.hop_samples) / cfg_.sample_rate;
  out.frame_window = static_cast<double>(cfg_.window_samples) / cfg_.sample_rate;
  for (int t = 0; t < frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * cfg_.hop_samples;
    for (int i = 0; i < cfg_.window_samples; ++i) {
      buffer[i] = emphasized[start + i] * window_[i];
    }
    fft.fwd(spectrum, buffer);
    for (int k = 0; k < bins; ++k) power[k] = std::norm(spectrum[k]);
    Eigen::VectorXd log_mel = (filterbank_ * power)
                                  .array()
                                  .max(cfg_.log_floor)
                                  .log()
                                  .matrix();
    out.frames.row(t) = (dct_ * log_mel).cast<float>().transpose();
  }
  return out;
}

FeatureMatrix ComputeMfcc(const Waveform& w, const MfccConfig& cfg) {
  return MfccExtractor(cfg).Compute(w.samples);
}

namespace {

FrameMatrix RegressionDelta(const FrameMatrix& x, int half_width) {
  const int rows = static_cast<int>(x.rows());
  double denom = 0.0;
  for (int n = 1; n <= half_width; ++n) denom += n * n;
  denom *= 2.0;
  FrameMatrix out(rows, x.cols());
  Eigen::RowVectorXd acc(x.cols());
  for (int t = 0; t < rows; ++t) {
    acc.setZero();
    for (int n = 1; n <= half_width; ++n) {
      const int ahead = std::min(t + n, rows - 1);
      const int behind = std::max(t - n, 0);
      acc += n * (x.row(ahead).cast<double>() - x.row(behind).cast<double>());
    }
    out.row(t) = (acc / denom).cast<float>();
  }
  return out;
}

}  // namespace

FeatureMatrix AppendDeltas(const FeatureMatrix& f, int half_width) {
  if (f.dim() != kStaticCoefficients) {
    throw DataError("append_deltas expects 13 static columns, got " +
                    std::to_string(f.dim()));
  }
  if (f.num_frames() < 1) throw DataError("append_deltas: no frames");
  FrameMatrix delta = RegressionDelta(f.frames, half_width);
  FrameMatrix delta2 = RegressionDelta(delta, half_width);
  FeatureMatrix out;
  out.frame_hop = f.frame_hop;
  out.frame_window = f.frame_window;
  out.frames.resize(f.num_frames(), kFeatureDim);
  out.frames.leftCols(kStaticCoefficients) = f.frames;
  out.frames.middleCols(kStaticCoefficients, kStaticCoefficients) = delta;
  out.frames.rightCols(kStaticCoefficients) = delta2;
  return out;
}

FeatureMatrix Cmvn(const FeatureMatrix& f) {
  FeatureMatrix out = f;
  const Eigen::Index rows = f.frames.rows();
  if (rows == 0) return out;
  for (Eigen::Index c = 0; c < f.frames.cols(); ++c) {
    Eigen::VectorXd col = f.frames.col(c).cast<double>();
    const double mean = col.mean();
    col.array() -= mean;
    const double stddev = std::sqrt(col.squaredNorm() / static_cast<double>(rows));
    if (stddev >= 1e-10) col /= stddev;
    out.frames.col(c) = col.cast<float>();
  }
  return out;
}

FeatureMatrix ExtractFeatures(const Waveform& w, const MfccExtractor& extractor) {
  if (w.sample_rate != extractor.config().sample_rate) {
    throw DataError("waveform sample rate " + std::to_string(w.sample_rate) +
                    " does not match the feature configuration");
  }
  FeatureMatrix f = AppendDeltas(extractor.Compute(w.samples),
                                 extractor.config().delta_window);
  return extractor.config().apply_cmvn ? Cmvn(f) : f;
}

}  // namespace artconv
