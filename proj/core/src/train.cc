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

#include "artconv/train.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "artconv/error.h"
#include "artconv/parallel.h"

namespace artconv {

void TrainConfig::Check() const {
  if (epochs < 0) throw DataError("epochs must be >= 0");
  if (batch_size < 1) throw DataError("batch_size must be >= 1");
  if (!(lr0 >= 0.0)) throw DataError("lr0 must be >= 0");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw DataError("lr_decay must lie in (0, 1]");
  if (!(l1_coeff >= 0.0)) throw DataError("l1_coeff must be >= 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw DataError("dropout_rate must lie in [0, 1)");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw DataError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw DataError("adam_eps must be positive");
  dims.Check();
}

void to_json(nlohmann::json& j, const TrainConfig& cfg) {
  j = {{"epochs", cfg.epochs},
       {"batch_size", cfg.batch_size},
       {"lr0", cfg.lr0},
       {"lr_decay", cfg.lr_decay},
       {"l1_coeff", cfg.l1_coeff},
       {"dropout_rate", cfg.dropout_rate},
       {"seed", cfg.seed},
       {"adam_beta1", cfg.adam_beta1},
       {"adam_beta2", cfg.adam_beta2},
       {"adam_eps", cfg.adam_eps},
       {"threshold", cfg.threshold},
       {"keep_best", cfg.keep_best},
       {"dims", {{"input", cfg.dims.input},
                 {"hidden", cfg.dims.hidden},
                 {"embedding", cfg.dims.embedding}}}};
}

void from_json(const nlohmann::json& j, TrainConfig& cfg) {
  const TrainConfig d;
  cfg.epochs = j.value("epochs", d.epochs);
  cfg.batch_size = j.value("batch_size", d.batch_size);
  cfg.lr0 = j.value("lr0", d.lr0);
  cfg.lr_decay = j.value("lr_decay", d.lr_decay);
  cfg.l1_coeff = j.value("l1_coeff", d.l1_coeff);
  cfg.dropout_rate = j.value("dropout_rate", d.dropout_rate);
  cfg.seed = j.value("seed", d.seed);
  cfg.adam_beta1 = j.value("adam_beta1", d.adam_beta1);
  cfg.adam_beta2 = j.value("adam_beta2", d.adam_beta2);
  cfg.adam_eps = j.value("adam_eps", d.adam_eps);
  cfg.threshold = j.value("threshold", d.threshold);
  cfg.keep_best = j.value("keep_best", d.keep_best);
  if (j.contains("dims")) {
    const auto& dj = j.at("dims");
    cfg.dims.input = dj.value("input", d.dims.input);
    cfg.dims.hidden = dj.value("hidden", d.dims.hidden);
    cfg.dims.embedding = dj.value("embedding", d.dims.embedding);
  }
}

DropoutMasks DrawDropoutMasks(int width, int instances, double rate,
                              std::mt19937_64& rng) {
  DropoutMasks masks = DropoutMasks::Ones(width, instances);
  if (rate <= 0.0) return masks;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int i = 0; i < instances; ++i) {
    for (int j = 0; j < width; ++j) masks(j, i) = u(rng) >= rate ? keep_scale : 0.0;
  }
  return masks;
}

namespace {

struct InstanceTrace {
  Eigen::MatrixXd frames;  // real frames only
  RnnTrace rnn;
};

struct RnnGradients {
  Eigen::MatrixXd input, recurrent;
  Eigen::VectorXd bias;
};

// Gradient of one direction given dLoss/d(output state). The forward
// direction emits its last row, the backward direction its first row.
RnnGradients DirectionBackward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& states,
                               Eigen::Map<const Eigen::MatrixXd> recurrent,
                               const Eigen::VectorXd& d_output, bool reverse) {
  const Eigen::Index length = states.rows();
  const Eigen::Index hidden = states.cols();
  Eigen::MatrixXd d_pre(length, hidden);
  Eigen::MatrixXd previous = Eigen::MatrixXd::Zero(length, hidden);
  Eigen::RowVectorXd dh = d_output.transpose();
  for (Eigen::Index step = 0; step < length; ++step) {
    const Eigen::Index t = reverse ? step : length - 1 - step;
    const Eigen::Index before = reverse ? t + 1 : t - 1;  // state fed into step t
    Eigen::RowVectorXd da = dh.array() * (1.0 - states.row(t).array().square());
    d_pre.row(t) = da;
    if (before >= 0 && before < length) previous.row(t) = states.row(before);
    dh.noalias() = da * recurrent;
  }
  RnnGradients g;
  g.input.noalias() = d_pre.transpose() * x;
  g.recurrent.noalias() = d_pre.transpose() * previous;
  g.bias = d_pre.colwise().sum().transpose();
  return g;
}

Eigen::MatrixXd SigmoidArray(const Eigen::MatrixXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

void CheckFinite(const Gradients& grads) {
  for (const TensorSpec& s : grads.layout()) {
    if (!grads.vec(s.id).allFinite()) {
      throw NumericError("non-finite gradient in tensor " + std::string(s.name));
    }
  }
}

}  // namespace

BatchResult ForwardBackward(const ModelParams& params, std::span<const PairInput> batch,
                            const LossOptions& options, const DropoutMasks& masks,
                            Gradients* grads) {
  if (batch.empty()) throw DataError("empty batch");
  const ModelDims& dims = params.dims();
  const TensorBuffer& w = params.weights;
  const Eigen::Index width = 2 * dims.hidden;
  const auto pairs = static_cast<Eigen::Index>(batch.size());
  const Eigen::Index n = 2 * pairs;
  const bool train = options.mode == Mode::kTrain;
  if (masks.size() != 0 && (masks.rows() != width || masks.cols() != n)) {
    throw DataError("dropout masks have the wrong shape");
  }

  // Recurrent layer, one instance per utterance side.
  std::vector<InstanceTrace> traces(static_cast<std::size_t>(n));
  ParallelFor(traces.size(), [&](std::size_t i) {
    const PairInput& p = batch[i / 2];
    const SequenceRef x = i % 2 == 0 ? p.left : p.right;
    traces[i].rnn = RnnForward(params, x);
    traces[i].frames = x.frames->topRows(x.length);
  });
  Eigen::MatrixXd summary(width, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    summary.col(i) = FinalHidden(traces[static_cast<std::size_t>(i)].rnn);
  }

  // Dropout -> batch normalization.
  const Eigen::MatrixXd dropped =
      masks.size() != 0 ? Eigen::MatrixXd(summary.cwiseProduct(masks)) : summary;
  BatchResult result;
  Eigen::VectorXd mean, var;
  if (train) {
    mean = dropped.rowwise().mean();
    var = (dropped.colwise() - mean).array().square().rowwise().mean();
    result.batch_mean = mean;
    result.batch_var = var;
  } else {
    mean = params.norm_running_mean;
    var = params.norm_running_var;
  }
  const Eigen::VectorXd inv_std = (var.array() + kNormEpsilon).rsqrt().matrix();
  const Eigen::MatrixXd xhat = (dropped.colwise() - mean).array().colwise() * inv_std.array();
  const auto scale = w.vec(TensorId::kNormScale);
  const auto shift = w.vec(TensorId::kNormShift);
  const Eigen::MatrixXd normed =
      (xhat.array().colwise() * scale.array()).colwise() + shift.array();

  // tanh projection and sigmoid embedding.
  const auto wy = w[TensorId::kProjectionWeights];
  const auto we = w[TensorId::kEmbeddingWeights];
  Eigen::MatrixXd proj = (wy * normed).colwise() + w.vec(TensorId::kProjectionBias);
  proj = proj.array().tanh().matrix();
  Eigen::MatrixXd emb = (we * proj).colwise() + w.vec(TensorId::kEmbeddingBias);
  emb = SigmoidArray(emb);

  // Cosine similarity and BCE per pair.
  Eigen::MatrixXd d_emb = Eigen::MatrixXd::Zero(emb.rows(), n);
  double loss = 0.0;
  result.similarities.resize(static_cast<std::size_t>(pairs));
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const Eigen::VectorXd a = emb.col(2 * p);
    const Eigen::VectorXd b = emb.col(2 * p + 1);
    const double na = a.norm(), nb = b.norm();
    const double g = a.dot(b) / (na * nb);
    const int label = batch[static_cast<std::size_t>(p)].label;
    result.similarities[static_cast<std::size_t>(p)] = g;
    loss += BceLoss(g, label);
    if (grads == nullptr) continue;
    double d_g = 0.0;
    if (g > kProbabilityClamp && g < 1.0 - kProbabilityClamp) {
      d_g = (label == 1 ? -1.0 / g : 1.0 / (1.0 - g)) / static_cast<double>(pairs);
    }
    d_emb.col(2 * p) = d_g * (b / (na * nb) - g * a / (na * na));
    d_emb.col(2 * p + 1) = d_g * (a / (na * nb) - g * b / (nb * nb));
  }
  loss /= static_cast<double>(pairs);
  if (options.l1_coeff > 0.0) {
    double penalty = 0.0;
    for (const TensorSpec& s : w.layout()) {
      if (s.is_weight) penalty += w.vec(s.id).lpNorm<1>();
    }
    loss += options.l1_coeff * penalty;
  }
  result.loss = loss;
  if (!std::isfinite(loss)) throw NumericError("non-finite loss");
  if (grads == nullptr) return result;

  if (grads->dims() != dims) *grads = Gradients(dims);
  grads->SetZero();
  Gradients& gr = *grads;

  const Eigen::MatrixXd d_emb_pre = d_emb.cwiseProduct(emb.cwiseProduct(
      (1.0 - emb.array()).matrix()));
  gr[TensorId::kEmbeddingWeights].noalias() = d_emb_pre * proj.transpose();
  gr.vec(TensorId::kEmbeddingBias) = d_emb_pre.rowwise().sum();
  const Eigen::MatrixXd d_proj_pre =
      (we.transpose() * d_emb_pre).cwiseProduct((1.0 - proj.array().square()).matrix());
  gr[TensorId::kProjectionWeights].noalias() = d_proj_pre * normed.transpose();
  gr.vec(TensorId::kProjectionBias) = d_proj_pre.rowwise().sum();
  const Eigen::MatrixXd d_normed = wy.transpose() * d_proj_pre;

  gr.vec(TensorId::kNormScale) = d_normed.cwiseProduct(xhat).rowwise().sum();
  gr.vec(TensorId::kNormShift) = d_normed.rowwise().sum();
  const Eigen::MatrixXd d_xhat = d_normed.array().colwise() * scale.array();
  Eigen::MatrixXd d_dropped;
  if (train) {
    const Eigen::VectorXd mean_d = d_xhat.rowwise().mean();
    const Eigen::VectorXd mean_dx = d_xhat.cwiseProduct(xhat).rowwise().mean();
    d_dropped = ((d_xhat.colwise() - mean_d) - (xhat.array().colwise() * mean_dx.array()).matrix());
    d_dropped = d_dropped.array().colwise() * inv_std.array();
  } else {
    d_dropped = d_xhat.array().colwise() * inv_std.array();
  }
  const Eigen::MatrixXd d_summary =
      masks.size() != 0 ? Eigen::MatrixXd(d_dropped.cwiseProduct(masks)) : d_dropped;

  // Backpropagation through time, per instance, reduced in a fixed order.
  std::vector<std::array<RnnGradients, 2>> per_instance(traces.size());
  const Eigen::Index h = dims.hidden;
  ParallelFor(traces.size(), [&](std::size_t i) {
    const InstanceTrace& tr = traces[i];
    const auto col = d_summary.col(static_cast<Eigen::Index>(i));
    per_instance[i][0] = DirectionBackward(tr.frames, tr.rnn.forward,
                                           w[TensorId::kForwardRecurrent],
                                           col.head(h), /*reverse=*/false);
    per_instance[i][1] = DirectionBackward(tr.frames, tr.rnn.backward,
                                           w[TensorId::kBackwardRecurrent],
                                           col.tail(h), /*reverse=*/true);
  });
  for (const auto& g : per_instance) {
    gr[TensorId::kForwardInput] += g[0].input;
    gr[TensorId::kForwardRecurrent] += g[0].recurrent;
    gr.vec(TensorId::kForwardBias) += g[0].bias;
    gr[TensorId::kBackwardInput] += g[1].input;
    gr[TensorId::kBackwardRecurrent] += g[1].recurrent;
    gr.vec(TensorId::kBackwardBias) += g[1].bias;
  }

  if (options.l1_coeff > 0.0) {
    for (const TensorSpec& s : w.layout()) {
      if (!s.is_weight) continue;
      gr.vec(s.id) += options.l1_coeff * w.vec(s.id).array().sign().matrix();
    }
  }
  CheckFinite(gr);
  return result;
}

BatchResult Backward(const ModelParams& params, const PairInput& pair,
                     const LossOptions& options, std::mt19937_64& rng,
                     Gradients& grads) {
  const DropoutMasks masks =
      options.mode == Mode::kTrain
          ? DrawDropoutMasks(2 * params.dims().hidden, 2, options.dropout_rate, rng)
          : DropoutMasks();
  return ForwardBackward(params, std::span<const PairInput>(&pair, 1), options, masks,
                         &grads);
}

AdamState InitAdam(const ModelParams& params) {
  const Eigen::Index size = params.weights.flat().size();
  return {Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size), 0};
}

void AdamStep(AdamState& state, ModelParams& params, const Gradients& grads, double lr,
              double beta1, double beta2, double eps) {
  Eigen::VectorXd& w = params.weights.flat();
  const Eigen::VectorXd& g = grads.flat();
  if (state.m.size() != w.size() || g.size() != w.size()) {
    throw DataError("Adam state shape does not match the parameters");
  }
  ++state.step;
  state.m = beta1 * state.m + (1.0 - beta1) * g;
  state.v = beta2 * state.v + (1.0 - beta2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  w.array() -= lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + eps);
}

void UpdateRunningStats(ModelParams& params, const BatchResult& batch, double momentum) {
  if (batch.batch_mean.size() == 0) return;
  params.norm_running_mean = momentum * params.norm_running_mean + (1.0 - momentum) * batch.batch_mean;
  params.norm_running_var = momentum * params.norm_running_var + (1.0 - momentum) * batch.batch_var;
}

void to_json(nlohmann::json& j, const EpochRecord& r) {
  j = {{"epoch", r.epoch}, {"learning_rate", r.learning_rate}, {"train_loss", r.train_loss}};
  j["validation"] = r.validation ? nlohmann::json(*r.validation) : nlohmann::json(nullptr);
}

namespace {

std::uint64_t DropoutSeed(std::uint64_t seed) { return seed * 0x9E3779B97F4A7C15ull + 0xD20Full; }

}  // namespace

TrainResult Train(const TrainConfig& cfg, std::span<const PairExample> train_pairs,
                  std::span<const PairExample> val_pairs, const FeatureStore& features,
                  ModelParams init, const EpochCallback& on_epoch) {
  cfg.Check();
  if (train_pairs.empty()) throw DataError("empty training set");
  std::vector<PairInput> inputs;
  inputs.reserve(train_pairs.size());
  for (const PairExample& p : train_pairs) {
    inputs.push_back({features.Get(p.left), features.Get(p.right), p.label});
  }

  TrainResult result;
  ModelParams params = std::move(init);
  AdamState adam = InitAdam(params);
  Gradients grads(params.dims());
  std::mt19937_64 shuffle_rng(cfg.seed);
  std::mt19937_64 dropout_rng(DropoutSeed(cfg.seed));
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  const LossOptions options{Mode::kTrain, cfg.dropout_rate, cfg.l1_coeff};
  const int width = 2 * params.dims().hidden;
  double best_accuracy = -1.0;

  std::vector<PairInput> batch;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.learning_rate = cfg.lr0 * std::pow(cfg.lr_decay, epoch);
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(inputs[order[k]]);
      const DropoutMasks masks = DrawDropoutMasks(
          width, static_cast<int>(2 * batch.size()), cfg.dropout_rate, dropout_rng);
      BatchResult br;
      try {
        br = ForwardBackward(params, batch, options, masks, &grads);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index) + ": " + e.what());
      }
      loss_sum += br.loss * static_cast<double>(batch.size());
      AdamStep(adam, params, grads, record.learning_rate, cfg.adam_beta1, cfg.adam_beta2,
               cfg.adam_eps);
      UpdateRunningStats(params, br);
      if (!params.weights.flat().allFinite()) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index) + ": parameters became non-finite");
      }
    }
    record.train_loss = loss_sum / static_cast<double>(order.size());
    if (!val_pairs.empty()) {
      record.validation = Evaluate(params, val_pairs, features, cfg.threshold);
      if (cfg.keep_best && record.validation->accuracy > best_accuracy) {
        best_accuracy = record.validation->accuracy;
        result.model = params;
        result.best_epoch = epoch;
      }
    }
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  result.final_model = params;
  if (result.best_epoch < 0) {
    result.model = params;
    result.best_epoch = cfg.epochs - 1;
  }
  return result;
}

std::vector<double> ScorePairs(const ModelParams& params, std::span<const PairExample> pairs,
                               const FeatureStore& features) {
  std::map<UtteranceKey, std::size_t> slot;
  std::vector<UtteranceKey> keys;
  for (const PairExample& p : pairs) {
    for (const UtteranceKey* k : {&p.left, &p.right}) {
      if (slot.emplace(*k, keys.size()).second) keys.push_back(*k);
    }
  }
  std::vector<Eigen::VectorXd> embeddings(keys.size());
  ParallelFor(keys.size(), [&](std::size_t i) {
    embeddings[i] = EmbedUtterance(params, features.Get(keys[i]));
  });
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const PairExample& p : pairs) {
    scores.push_back(
        CosineSimilarity(embeddings[slot.at(p.left)], embeddings[slot.at(p.right)]));
  }
  return scores;
}

MetricsReport Evaluate(const ModelParams& params, std::span<const PairExample> pairs,
                       const FeatureStore& features, double threshold) {
  if (pairs.empty()) throw DataError("evaluate: empty pair set");
  const std::vector<double> scores = ScorePairs(params, pairs, features);
  std::vector<int> labels;
  labels.reserve(pairs.size());
  for (const PairExample& p : pairs) labels.push_back(p.label);
  return ComputeMetrics(scores, labels, threshold);
}

}  // namespace artconv
