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

#ifndef ARTCONV_TRAIN_H_
#define ARTCONV_TRAIN_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "artconv/corpus.h"
#include "artconv/feature_store.h"
#include "artconv/metrics.h"
#include "artconv/net.h"

namespace artconv {

struct TrainConfig {
  int epochs = 50;
  int batch_size = 32;
  double lr0 = 1e-3;
  double lr_decay = 0.95;  // per epoch
  double l1_coeff = 1e-5;
  double dropout_rate = 0.2;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double threshold = 0.5;
  // Keep the epoch with the best validation accuracy; otherwise return the
  // parameters after the last epoch.
  bool keep_best = true;
  ModelDims dims;

  void Check() const;
};

void to_json(nlohmann::json& j, const TrainConfig& cfg);
void from_json(const nlohmann::json& j, TrainConfig& cfg);

// One Siamese training example resolved to feature sequences.
struct PairInput {
  SequenceRef left;
  SequenceRef right;
  int label = 0;
};

struct LossOptions {
  Mode mode = Mode::kTrain;
  double dropout_rate = 0.0;
  double l1_coeff = 0.0;
};

// Dropout keep-masks (already scaled by 1/(1-rate)), one column per
// utterance instance: instance 2i is pair i's left side, 2i+1 its right.
using DropoutMasks = Eigen::MatrixXd;

DropoutMasks DrawDropoutMasks(int width, int instances, double rate,
                              std::mt19937_64& rng);

struct BatchResult {
  double loss = 0.0;  // mean BCE over pairs plus the L1 penalty
  std::vector<double> similarities;
  Eigen::VectorXd batch_mean;  // normalization statistics (train mode)
  Eigen::VectorXd batch_var;
};

// Forward pass over a batch of pairs with fixed dropout masks (pass an
// empty matrix for none). Both branches of every pair share `params`; in
// train mode the normalization layer pools the summaries of all 2B
// utterances. When `grads` is non-null it receives the exact gradient of
// the loss. Throws NumericError naming the tensor if anything goes
// non-finite.
BatchResult ForwardBackward(const ModelParams& params, std::span<const PairInput> batch,
                            const LossOptions& options, const DropoutMasks& masks,
                            Gradients* grads);

// Convenience single-pair form drawing its own dropout masks.
BatchResult Backward(const ModelParams& params, const PairInput& pair,
                     const LossOptions& options, std::mt19937_64& rng,
                     Gradients& grads);

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step = 0;
};

AdamState InitAdam(const ModelParams& params);

// Bias-corrected Adam update of every trainable scalar.
void AdamStep(AdamState& state, ModelParams& params, const Gradients& grads,
              double lr, double beta1 = 0.9, double beta2 = 0.999,
              double eps = 1e-8);

// running = momentum * running + (1 - momentum) * batch
void UpdateRunningStats(ModelParams& params, const BatchResult& batch,
                        double momentum = kNormMomentum);

struct EpochRecord {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  std::optional<MetricsReport> validation;
};

void to_json(nlohmann::json& j, const EpochRecord& r);

struct TrainResult {
  ModelParams model;  // best-validation (or final) parameters
  ModelParams final_model;
  std::vector<EpochRecord> history;
  int best_epoch = -1;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Shuffled mini-batch training. Epoch e (0-based) uses lr0 * lr_decay^e.
// Throws DataError on an empty training set and NumericError (with epoch
// and batch index) when the loss stops being finite.
TrainResult Train(const TrainConfig& cfg, std::span<const PairExample> train_pairs,
                  std::span<const PairExample> val_pairs, const FeatureStore& features,
                  ModelParams init, const EpochCallback& on_epoch = {});

// Inference-mode similarities, one per pair, in input order.
std::vector<double> ScorePairs(const ModelParams& params,
                               std::span<const PairExample> pairs,
                               const FeatureStore& features);

MetricsReport Evaluate(const ModelParams& params, std::span<const PairExample> pairs,
                       const FeatureStore& features, double threshold = 0.5);

}  // namespace artconv

#endif  // ARTCONV_TRAIN_H_
