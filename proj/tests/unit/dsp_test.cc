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
#include <random>

#include <gtest/gtest.h>

#include "artconv/error.h"

namespace artconv {
namespace {

std::vector<double> Noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  std::vector<double> out(n);
  for (double& v : out) v = normal(rng);
  return out;
}

FeatureMatrix Statics(const FrameMatrix& m) {
  FeatureMatrix f;
  f.frames = m;
  return f;
}

TEST(FrameCountTest, Examples) {
  EXPECT_EQ(FrameCount(16000, 400, 160), 98);
  EXPECT_EQ(FrameCount(400, 400, 160), 1);
  EXPECT_EQ(FrameCount(399, 400, 160), 0);
  EXPECT_EQ(FrameCount(560, 400, 160), 2);
  EXPECT_EQ(FrameCount(559, 400, 160), 1);
}

TEST(FrameCountTest, MatchesFormula) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const long n = 400 + static_cast<long>(rng() % 100000);
    EXPECT_EQ(FrameCount(n, 400, 160), 1 + (n - 400) / 160);
  }
}

TEST(MfccTest, OneSecondGivesNinetyEightFrames) {
  Waveform w;
  w.samples = Noise(16000, 1);
  const FeatureMatrix f = ComputeMfcc(w);
  EXPECT_EQ(f.num_frames(), 98);
  EXPECT_EQ(f.dim(), kStaticCoefficients);
  EXPECT_DOUBLE_EQ(f.frame_hop, 0.010);
  EXPECT_DOUBLE_EQ(f.frame_window, 0.025);
  EXPECT_TRUE(f.frames.allFinite());
}

TEST(MfccTest, ShortAudioIsAnError) {
  Waveform w;
  w.samples = Noise(399, 1);
  EXPECT_THROW(ComputeMfcc(w), DataError);
}

TEST(MfccTest, SilenceHitsTheLogFloor) {
  Waveform w;
  w.samples.assign(16000, 0.0);
  const FeatureMatrix f = ComputeMfcc(w);
  // Every log-mel energy equals ln(1e-10); the orthonormal DCT maps a
  // constant vector to c0 = sqrt(40) * value and zeros elsewhere.
  const double c0 = std::sqrt(40.0) * std::log(1e-10);
  for (int t = 0; t < f.num_frames(); ++t) {
    EXPECT_NEAR(f.frames(t, 0), c0, 1e-4);
    for (int k = 1; k < kStaticCoefficients; ++k) EXPECT_NEAR(f.frames(t, k), 0.0, 1e-4);
  }
}

TEST(MfccTest, FilterbankTrianglesPeakAtOne) {
  const MfccExtractor ex;
  const Eigen::MatrixXd& fb = ex.filterbank();
  EXPECT_EQ(fb.rows(), 40);
  EXPECT_EQ(fb.cols(), 257);
  EXPECT_GE(fb.minCoeff(), 0.0);
  EXPECT_LE(fb.maxCoeff(), 1.0);
  for (Eigen::Index f = 0; f < fb.rows(); ++f) EXPECT_GT(fb.row(f).maxCoeff(), 0.0);
}

TEST(MfccTest, Deterministic) {
  Waveform w;
  w.samples = Noise(8000, 5);
  const FeatureMatrix a = ExtractFeatures(w, MfccExtractor());
  const FeatureMatrix b = ExtractFeatures(w, MfccExtractor());
  EXPECT_EQ(a.frames, b.frames);
}

TEST(MfccTest, ConfigRejectsBadValues) {
  MfccConfig cfg;
  cfg.fft_size = 300;
  EXPECT_THROW(MfccExtractor{cfg}, DataError);
  cfg = {};
  cfg.num_ceps = 41;
  EXPECT_THROW(MfccExtractor{cfg}, DataError);
  cfg = {};
  cfg.high_freq = 9000.0;
  EXPECT_THROW(MfccExtractor{cfg}, DataError);
}

TEST(MfccTest, ConfigJsonRoundTrip) {
  MfccConfig cfg;
  cfg.apply_cmvn = false;
  cfg.delta_window = 2;
  const MfccConfig back = nlohmann::json(cfg).get<MfccConfig>();
  EXPECT_FALSE(back.apply_cmvn);
  EXPECT_EQ(back.delta_window, 2);
  EXPECT_EQ(back.num_mel_filters, 40);
}

TEST(DeltaTest, ConstantInputHasZeroDeltas) {
  const FeatureMatrix d = AppendDeltas(Statics(FrameMatrix::Constant(20, 13, 3.5f)));
  EXPECT_EQ(d.dim(), kFeatureDim);
  EXPECT_TRUE((d.frames.rightCols(26).array() == 0.0f).all());
}

TEST(DeltaTest, LinearRampAwayFromEdges) {
  FrameMatrix m(30, 13);
  for (int t = 0; t < 30; ++t) m.row(t).setConstant(0.25f * t);
  const FeatureMatrix d = AppendDeltas(Statics(m));
  // The second-order window reaches 8 frames from each edge.
  for (int t = 8; t < 22; ++t) {
    for (int k = 0; k < 13; ++k) {
      EXPECT_NEAR(d.frames(t, 13 + k), 0.25, 1e-6);
      EXPECT_NEAR(d.frames(t, 26 + k), 0.0, 1e-6);
    }
  }
}

TEST(DeltaTest, SingleFrameGivesZeroDeltas) {
  FrameMatrix m = FrameMatrix::Random(1, 13);
  const FeatureMatrix d = AppendDeltas(Statics(m));
  EXPECT_EQ(d.num_frames(), 1);
  EXPECT_TRUE((d.frames.rightCols(26).array() == 0.0f).all());
}

TEST(DeltaTest, TimeReversalNegatesFirstDelta) {
  std::mt19937 rng(9);
  std::normal_distribution<float> normal;
  FrameMatrix m(25, 13), r(25, 13);
  for (int t = 0; t < 25; ++t) {
    for (int k = 0; k < 13; ++k) m(t, k) = normal(rng);
  }
  for (int t = 0; t < 25; ++t) r.row(t) = m.row(24 - t);
  const FeatureMatrix a = AppendDeltas(Statics(m));
  const FeatureMatrix b = AppendDeltas(Statics(r));
  for (int t = 0; t < 25; ++t) {
    for (int k = 0; k < 13; ++k) {
      EXPECT_NEAR(b.frames(t, 13 + k), -a.frames(24 - t, 13 + k), 1e-5);
      EXPECT_NEAR(b.frames(t, 26 + k), a.frames(24 - t, 26 + k), 1e-5);
    }
  }
}

TEST(DeltaTest, WrongWidthIsAnError) {
  EXPECT_THROW(AppendDeltas(Statics(FrameMatrix::Zero(5, 12))), DataError);
}

TEST(CmvnTest, ThreeValueExample) {
  FeatureMatrix f;
  f.frames.resize(3, 1);
  f.frames << 1.0f, 2.0f, 3.0f;
  const FeatureMatrix n = Cmvn(f);
  EXPECT_NEAR(n.frames(0, 0), -1.2247449, 1e-6);
  EXPECT_NEAR(n.frames(1, 0), 0.0, 1e-6);
  EXPECT_NEAR(n.frames(2, 0), 1.2247449, 1e-6);
}

TEST(CmvnTest, ConstantColumnBecomesZero) {
  FeatureMatrix f;
  f.frames = FrameMatrix::Constant(10, 2, 4.0f);
  const FeatureMatrix n = Cmvn(f);
  EXPECT_TRUE(n.frames.allFinite());
  EXPECT_TRUE((n.frames.array() == 0.0f).all());
}

TEST(CmvnTest, ZeroMeanUnitVarianceAndIdempotent) {
  Waveform w;
  w.samples = Noise(12000, 11);
  const FeatureMatrix f = ExtractFeatures(w, MfccExtractor());
  for (int c = 0; c < f.dim(); ++c) {
    const Eigen::VectorXd col = f.frames.col(c).cast<double>();
    EXPECT_NEAR(col.mean(), 0.0, 1e-6);
    const double var = (col.array() - col.mean()).square().mean();
    EXPECT_NEAR(var, 1.0, 1e-4);
  }
  const FeatureMatrix again = Cmvn(f);
  EXPECT_LT((again.frames - f.frames).cwiseAbs().maxCoeff(), 1e-5);
}

}  // namespace
}  // namespace artconv
