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

#include "artconv/net.h"

#include <cmath>
#include <string>

#include "artconv/error.h"

namespace artconv {

void ModelDims::Check() const {
  if (input < 1 || hidden < 1 || embedding < 1) {
    throw DataError("model dimensions must be strictly positive");
  }
}

std::array<TensorSpec, kNumTensors> TensorLayout(const ModelDims& d) {
  const int h = d.hidden, in = d.input, e = d.embedding;
  std::array<TensorSpec, kNumTensors> layout = {{
      {TensorId::kForwardInput, "fwd.W_h", h, in, 0, true},
      {TensorId::kForwardRecurrent, "fwd.U_h", h, h, 0, true},
      {TensorId::kForwardBias, "fwd.b_h", h, 1, 0, false},
      {TensorId::kBackwardInput, "bwd.W_h", h, in, 0, true},
      {TensorId::kBackwardRecurrent, "bwd.U_h", h, h, 0, true},
      {TensorId::kBackwardBias, "bwd.b_h", h, 1, 0, false},
      {TensorId::kProjectionWeights, "W_y", e, 2 * h, 0, true},
      {TensorId::kProjectionBias, "b_y", e, 1, 0, false},
      {TensorId::kEmbeddingWeights, "W_e", e, e, 0, true},
      {TensorId::kEmbeddingBias, "b_e", e, 1, 0, false},
      {TensorId::kNormScale, "bn.scale", 2 * h, 1, 0, false},
      {TensorId::kNormShift, "bn.shift", 2 * h, 1, 0, false},
  }};
  std::size_t offset = 0;
  for (TensorSpec& s : layout) {
    s.offset = offset;
    offset += static_cast<std::size_t>(s.rows) * s.cols;
  }
  return layout;
}

std::size_t ParameterCount(const ModelDims& dims) {
  const auto layout = TensorLayout(dims);
  const TensorSpec& last = layout.back();
  return last.offset + static_cast<std::size_t>(last.rows) * last.cols;
}

TensorBuffer::TensorBuffer(const ModelDims& dims)
    : dims_(dims), layout_(TensorLayout(dims)),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ParameterCount(dims)))) {
  dims.Check();
}

Eigen::Map<Eigen::MatrixXd> TensorBuffer::operator[](TensorId id) {
  const TensorSpec& s = spec(id);
  return {values_.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<const Eigen::MatrixXd> TensorBuffer::operator[](TensorId id) const {
  const TensorSpec& s = spec(id);
  return {values_.data() + s.offset, s.rows, s.cols};
}

Eigen::Map<Eigen::VectorXd> TensorBuffer::vec(TensorId id) {
  const TensorSpec& s = spec(id);
  return {values_.data() + s.offset, static_cast<Eigen::Index>(s.rows) * s.cols};
}

Eigen::Map<const Eigen::VectorXd> TensorBuffer::vec(TensorId id) const {
  const TensorSpec& s = spec(id);
  return {values_.data() + s.offset, static_cast<Eigen::Index>(s.rows) * s.cols};
}

bool ModelParams::AllFinite() const {
  return weights.flat().allFinite() && norm_running_mean.allFinite() &&
         norm_running_var.allFinite();
}

ModelParams InitParams(const ModelDims& dims, std::uint64_t seed) {
  ModelParams params;
  params.weights = TensorBuffer(dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, kInitStddev);
  for (const TensorSpec& s : params.weights.layout()) {
    auto t = params.weights.vec(s.id);
    if (s.is_weight) {
      for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = normal(rng);
    } else if (s.id == TensorId::kNormScale) {
      t.setOnes();
    } else {
      t.setZero();
    }
  }
  params.norm_running_mean = Eigen::VectorXd::Zero(2 * dims.hidden);
  params.norm_running_var = Eigen::VectorXd::Ones(2 * dims.hidden);
  return params;
}

namespace {

// Runs one direction. `reverse` walks the frames from last to first.
Eigen::MatrixXd RunDirection(const Eigen::MatrixXd& x,
                             Eigen::Map<const Eigen::MatrixXd> input_weights,
                             Eigen::Map<const Eigen::MatrixXd> recurrent,
                             Eigen::Map<const Eigen::MatrixXd> bias, bool reverse) {
  const Eigen::Index length = x.rows();
  // Input contribution for every step at once: length x hidden.
  Eigen::MatrixXd pre = x * input_weights.transpose();
  pre.rowwise() += bias.col(0).transpose();
  Eigen::MatrixXd states(length, input_weights.rows());
  Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(input_weights.rows());
  for (Eigen::Index step = 0; step < length; ++step) {
    const Eigen::Index t = reverse ? length - 1 - step : step;
    Eigen::RowVectorXd a = pre.row(t);
    a.noalias() += h * recurrent.transpose();
    h = a.array().tanh();
    states.row(t) = h;
  }
  return states;
}

Eigen::VectorXd Sigmoid(const Eigen::VectorXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

}  // namespace

RnnTrace RnnForward(const ModelParams& params, SequenceRef x) {
  const ModelDims& dims = params.dims();
  if (x.frames == nullptr) throw DataError("rnn_forward: no input frames");
  if (x.length < 1) throw DataError("rnn_forward: true length must be >= 1");
  if (x.length > x.frames->rows()) {
    throw DataError("rnn_forward: true length " + std::to_string(x.length) +
                    " exceeds " + std::to_string(x.frames->rows()) + " frames");
  }
  if (x.frames->cols() != dims.input) {
    throw DataError("rnn_forward: expected " + std::to_string(dims.input) +
                    " input columns, got " + std::to_string(x.frames->cols()));
  }
  // Private copy of the real frames; padding is never read.
  const Eigen::MatrixXd real = x.frames->topRows(x.length);
  const TensorBuffer& w = params.weights;
  RnnTrace trace;
  trace.forward = RunDirection(real, w[TensorId::kForwardInput],
                               w[TensorId::kForwardRecurrent],
                               w[TensorId::kForwardBias], /*reverse=*/false);
  trace.backward = RunDirection(real, w[TensorId::kBackwardInput],
                                w[TensorId::kBackwardRecurrent],
                                w[TensorId::kBackwardBias], /*reverse=*/true);
  return trace;
}

Eigen::VectorXd FinalHidden(const RnnTrace& trace) {
  const Eigen::Index h = trace.forward.cols();
  Eigen::VectorXd out(2 * h);
  out.head(h) = trace.forward.row(trace.forward.rows() - 1).transpose();
  out.tail(h) = trace.backward.row(0).transpose();
  return out;
}

Eigen::VectorXd HeadForward(const ModelParams& params,
                            const Eigen::VectorXd& normalized,
                            Eigen::VectorXd* projection) {
  const TensorBuffer& w = params.weights;
  Eigen::VectorXd y = (w[TensorId::kProjectionWeights] * normalized +
                       w.vec(TensorId::kProjectionBias))
                          .array()
                          .tanh()
                          .matrix();
  Eigen::VectorXd e =
      Sigmoid(w[TensorId::kEmbeddingWeights] * y + w.vec(TensorId::kEmbeddingBias));
  if (projection != nullptr) *projection = std::move(y);
  return e;
}

std::vector<Eigen::VectorXd> EmbedBatch(const ModelParams& params,
                                        std::span<const SequenceRef> batch,
                                        Mode mode, double dropout_rate,
                                        std::mt19937_64* rng) {
  const Eigen::Index width = 2 * params.dims().hidden;
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd summaries(width, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    summaries.col(i) = FinalHidden(RnnForward(params, batch[static_cast<std::size_t>(i)]));
  }
  Eigen::VectorXd mean, var;
  if (mode == Mode::kTrain) {
    if (dropout_rate > 0.0) {
      if (rng == nullptr) throw DataError("train-mode dropout needs an rng");
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double keep_scale = 1.0 / (1.0 - dropout_rate);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < width; ++j) {
          summaries(j, i) *= u(*rng) >= dropout_rate ? keep_scale : 0.0;
        }
      }
    }
    mean = summaries.rowwise().mean();
    var = (summaries.colwise() - mean).array().square().rowwise().mean();
  } else {
    mean = params.norm_running_mean;
    var = params.norm_running_var;
  }
  const Eigen::ArrayXd inv_std = (var.array() + kNormEpsilon).rsqrt();
  const auto scale = params.weights.vec(TensorId::kNormScale);
  const auto shift = params.weights.vec(TensorId::kNormShift);
  std::vector<Eigen::VectorXd> out;
  out.reserve(batch.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd normalized =
        (((summaries.col(i) - mean).array() * inv_std) * scale.array() + shift.array())
            .matrix();
    out.push_back(HeadForward(params, normalized));
  }
  return out;
}

Eigen::VectorXd EmbedUtterance(const ModelParams& params, SequenceRef x) {
  const SequenceRef one[] = {x};
  return EmbedBatch(params, one, Mode::kInfer, 0.0, nullptr).front();
}

double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw DataError("cosine_similarity: length mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw DataError("cosine_similarity: zero-norm input");
  }
  return a.dot(b) / (na * nb);
}

double SiameseScore(const ModelParams& params, SequenceRef left, SequenceRef right) {
  return CosineSimilarity(EmbedUtterance(params, left), EmbedUtterance(params, right));
}

}  // namespace artconv
