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

#ifndef ARTCONV_TESTS_ORACLES_REFERENCE_NET_H_
#define ARTCONV_TESTS_ORACLES_REFERENCE_NET_H_

#include <algorithm>
#include <cmath>
#include <vector>

#include "artconv/net.h"
#include "artconv/train.h"

// Scalar-loop reimplementation of the network, written directly from the
// model equations and sharing no code with the library beyond parameter
// storage.
namespace artconv::oracle {

using Vec = std::vector<double>;

inline Vec Direction(const ModelParams& p, const Eigen::MatrixXd& x, int length, bool reverse) {
  const TensorBuffer& w = p.weights;
  const auto W = w[reverse ? TensorId::kBackwardInput : TensorId::kForwardInput];
  const auto U = w[reverse ? TensorId::kBackwardRecurrent : TensorId::kForwardRecurrent];
  const auto b = w.vec(reverse ? TensorId::kBackwardBias : TensorId::kForwardBias);
  const int h = static_cast<int>(W.rows());
  const int d = static_cast<int>(W.cols());
  Vec state(h, 0.0), next(h);
  for (int step = 0; step < length; ++step) {
    const int t = reverse ? length - 1 - step : step;
    for (int i = 0; i < h; ++i) {
      double a = b[i];
      for (int k = 0; k < d; ++k) a += W(i, k) * x(t, k);
      for (int k = 0; k < h; ++k) a += U(i, k) * state[k];
      next[i] = std::tanh(a);
    }
    state = next;
  }
  return state;
}

inline Vec Summary(const ModelParams& p, const Eigen::MatrixXd& x, int length) {
  Vec f = Direction(p, x, length, false);
  const Vec b = Direction(p, x, length, true);
  f.insert(f.end(), b.begin(), b.end());
  return f;
}

inline Vec Head(const ModelParams& p, const Vec& u) {
  const TensorBuffer& w = p.weights;
  const auto Wy = w[TensorId::kProjectionWeights];
  const auto by = w.vec(TensorId::kProjectionBias);
  const auto We = w[TensorId::kEmbeddingWeights];
  const auto be = w.vec(TensorId::kEmbeddingBias);
  Vec y(static_cast<std::size_t>(Wy.rows())), e(static_cast<std::size_t>(We.rows()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    double a = by[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < u.size(); ++k) a += Wy(i, k) * u[k];
    y[i] = std::tanh(a);
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    double a = be[static_cast<Eigen::Index>(i)];
    for (std::size_t k = 0; k < y.size(); ++k) a += We(i, k) * y[k];
    e[i] = 1.0 / (1.0 + std::exp(-a));
  }
  return e;
}

inline double Cosine(const Vec& a, const Vec& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

inline Vec EmbedInfer(const ModelParams& p, const Eigen::MatrixXd& x, int length) {
  Vec s = Summary(p, x, length);
  const auto scale = p.weights.vec(TensorId::kNormScale);
  const auto shift = p.weights.vec(TensorId::kNormShift);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    s[j] = scale[k] * (s[j] - p.norm_running_mean[k]) /
               std::sqrt(p.norm_running_var[k] + kNormEpsilon) +
           shift[k];
  }
  return Head(p, s);
}

// Train-mode batch loss: fixed dropout masks (empty = none), batch-norm
// over all 2B summaries, mean clamped BCE on cosine, plus the L1 penalty.
inline double BatchLoss(const ModelParams& p, const std::vector<PairInput>& batch,
                        const Eigen::MatrixXd& masks, double l1) {
  const std::size_t n = 2 * batch.size();
  std::vector<Vec> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SequenceRef s = i % 2 == 0 ? batch[i / 2].left : batch[i / 2].right;
    z[i] = Summary(p, *s.frames, s.length);
    if (masks.size() != 0) {
      for (std::size_t j = 0; j < z[i].size(); ++j) z[i][j] *= masks(j, i);
    }
  }
  const std::size_t width = z[0].size();
  const auto scale = p.weights.vec(TensorId::kNormScale);
  const auto shift = p.weights.vec(TensorId::kNormShift);
  for (std::size_t j = 0; j < width; ++j) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += z[i][j] / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) var += (z[i][j] - mean) * (z[i][j] - mean) / static_cast<double>(n);
    const auto k = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < n; ++i) {
      z[i][j] = scale[k] * (z[i][j] - mean) / std::sqrt(var + kNormEpsilon) + shift[k];
    }
  }
  double loss = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double g = Cosine(Head(p, z[2 * b]), Head(p, z[2 * b + 1]));
    const double q = std::clamp(g, 1e-7, 1.0 - 1e-7);
    loss += batch[b].label == 1 ? -std::log(q) : -std::log(1.0 - q);
  }
  loss /= static_cast<double>(batch.size());
  double penalty = 0.0;
  for (const TensorSpec& s : p.weights.layout()) {
    if (!s.is_weight) continue;
    const auto t = p.weights.vec(s.id);
    for (Eigen::Index i = 0; i < t.size(); ++i) penalty += std::abs(t[i]);
  }
  return loss + l1 * penalty;
}

}  // namespace artconv::oracle

#endif  // ARTCONV_TESTS_ORACLES_REFERENCE_NET_H_
