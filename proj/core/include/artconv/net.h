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

#ifndef ARTCONV_NET_H_
#define ARTCONV_NET_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace artconv {

struct ModelDims {
  int input = 39;       // MFCC + Δ + ΔΔ
  int hidden = 50;      // per RNN direction
  int embedding = 50;   // feedforward and embedding width

  void Check() const;
  bool operator==(const ModelDims&) const = default;
};

// Trainable tensors in storage and checkpoint order.
enum class TensorId : int {
  kForwardInput,       // hidden x input
  kForwardRecurrent,   // hidden x hidden
  kForwardBias,        // hidden
  kBackwardInput,
  kBackwardRecurrent,
  kBackwardBias,
  kProjectionWeights,  // embedding x 2*hidden   (tanh layer)
  kProjectionBias,     // embedding
  kEmbeddingWeights,   // embedding x embedding  (sigmoid layer)
  kEmbeddingBias,      // embedding
  kNormScale,          // 2*hidden
  kNormShift,          // 2*hidden
};
inline constexpr int kNumTensors = 12;

struct TensorSpec {
  TensorId id;
  std::string_view name;
  int rows;
  int cols;  // 1 for vectors
  std::size_t offset;
  bool is_weight;  // weight matrix, subject to the L1 penalty
};

std::array<TensorSpec, kNumTensors> TensorLayout(const ModelDims& dims);

// Total trainable scalars over every tensor in TensorLayout().
std::size_t ParameterCount(const ModelDims& dims);

// All trainable tensors packed into one contiguous vector, with typed
// views. Used both for parameters and for their gradients.
class TensorBuffer {
 public:
  TensorBuffer() = default;
  explicit TensorBuffer(const ModelDims& dims);

  const ModelDims& dims() const { return dims_; }
  const std::array<TensorSpec, kNumTensors>& layout() const { return layout_; }
  const TensorSpec& spec(TensorId id) const { return layout_[static_cast<int>(id)]; }

  Eigen::Map<Eigen::MatrixXd> operator[](TensorId id);
  Eigen::Map<const Eigen::MatrixXd> operator[](TensorId id) const;
  Eigen::Map<Eigen::VectorXd> vec(TensorId id);
  Eigen::Map<const Eigen::VectorXd> vec(TensorId id) const;

  Eigen::VectorXd& flat() { return values_; }
  const Eigen::VectorXd& flat() const { return values_; }

  void SetZero() { values_.setZero(); }
  bool operator==(const TensorBuffer& other) const {
    return dims_ == other.dims_ && values_ == other.values_;
  }

 private:
  ModelDims dims_;
  std::array<TensorSpec, kNumTensors> layout_{};
  Eigen::VectorXd values_;
};

using Gradients = TensorBuffer;

// One parameter store read by both Siamese branches.
struct ModelParams {
  TensorBuffer weights;
  Eigen::VectorXd norm_running_mean;  // 2*hidden, not trainable
  Eigen::VectorXd norm_running_var;   // 2*hidden, not trainable

  const ModelDims& dims() const { return weights.dims(); }
  bool AllFinite() const;
  bool operator==(const ModelParams& other) const {
    return weights == other.weights && norm_running_mean == other.norm_running_mean &&
           norm_running_var == other.norm_running_var;
  }
};

inline constexpr double kInitStddev = 0.05;

// Weights ~ N(0, 0.05^2), biases 0, norm scale 1 and shift 0, running
// mean 0 and variance 1.
ModelParams InitParams(const ModelDims& dims, std::uint64_t seed);

inline constexpr double kNormEpsilon = 1e-3;
inline constexpr double kNormMomentum = 0.99;

// A sequence of feature frames (rows) of which the first `length` are real
// and the rest padding.
struct SequenceRef {
  const Eigen::MatrixXd* frames = nullptr;
  int length = 0;
};

// Hidden states of both directions for t = 0..length-1 (one row per step).
struct RnnTrace {
  Eigen::MatrixXd forward;   // row t: state after reading frames 0..t
  Eigen::MatrixXd backward;  // row t: state after reading frames length-1..t
};

// Padded rows are never read. Throws DataError when length < 1 or exceeds
// the number of frames.
RnnTrace RnnForward(const ModelParams& params, SequenceRef x);

// Utterance summary fed to the normalization layer: the forward state at
// the last real frame joined with the backward state after the backward
// pass has consumed the whole utterance (its value at the first frame).
Eigen::VectorXd FinalHidden(const RnnTrace& trace);

enum class Mode { kTrain, kInfer };

// Post-RNN head for one utterance given its already normalized summary:
// tanh projection followed by the sigmoid embedding layer.
Eigen::VectorXd HeadForward(const ModelParams& params,
                            const Eigen::VectorXd& normalized,
                            Eigen::VectorXd* projection = nullptr);

// Inference-mode embedding: no dropout, running normalization statistics.
// Every entry lies in (0, 1).
Eigen::VectorXd EmbedUtterance(const ModelParams& params, SequenceRef x);

// Embeddings for a batch. In train mode dropout (inverted scaling) is drawn
// from `rng` and normalization uses the batch statistics; running
// statistics are not touched.
std::vector<Eigen::VectorXd> EmbedBatch(const ModelParams& params,
                                        std::span<const SequenceRef> batch,
                                        Mode mode, double dropout_rate,
                                        std::mt19937_64* rng);

// Throws DataError on length mismatch or zero norm.
double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Similarity of two utterances under one shared parameter store.
double SiameseScore(const ModelParams& params, SequenceRef left, SequenceRef right);

}  // namespace artconv

#endif  // ARTCONV_NET_H_
