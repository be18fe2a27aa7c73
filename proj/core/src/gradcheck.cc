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

#include "artconv/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "artconv/error.h"
#include "artconv/train.h"

namespace artconv {

double RelativeError(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) /
         std::max(std::abs(analytic) + std::abs(numeric), floor);
}

GradCheckReport GradientCheck(const ModelDims& dims, std::uint64_t seed,
                              const GradCheckOptions& options) {
  dims.Check();
  if (options.sequence_length < 2 || options.pairs < 1) {
    throw DataError("gradcheck needs sequence_length >= 2 and pairs >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  ModelParams params = InitParams(dims, seed);
  for (const TensorSpec& s : params.weights.layout()) {
    auto t = params.weights.vec(s.id);
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double z = options.init_stddev * normal(rng);
      t[i] = s.id == TensorId::kNormScale ? 1.0 + z : z;
    }
  }

  const int n_seq = 2 * options.pairs;
  std::vector<Eigen::MatrixXd> frames(static_cast<std::size_t>(n_seq));
  std::vector<PairInput> batch(static_cast<std::size_t>(options.pairs));
  for (int i = 0; i < n_seq; ++i) {
    auto& x = frames[static_cast<std::size_t>(i)];
    x = Eigen::MatrixXd::NullaryExpr(options.sequence_length, dims.input,
                                     [&] { return normal(rng); });
  }
  for (int p = 0; p < options.pairs; ++p) {
    PairInput& in = batch[static_cast<std::size_t>(p)];
    const int shorter = std::max(1, options.sequence_length - 2);
    in.left = {&frames[static_cast<std::size_t>(2 * p)], options.sequence_length};
    in.right = {&frames[static_cast<std::size_t>(2 * p + 1)],
                p % 2 == 0 ? options.sequence_length : shorter};
    in.label = p % 2 == 0 ? 1 : 0;
  }

  const LossOptions loss_options{Mode::kTrain, options.dropout_rate, options.l1_coeff};
  const DropoutMasks masks =
      DrawDropoutMasks(2 * dims.hidden, n_seq, options.dropout_rate, rng);
  Gradients analytic(dims);
  ForwardBackward(params, batch, loss_options, masks, &analytic);

  auto loss_at = [&](ModelParams& p) {
    return ForwardBackward(p, batch, loss_options, masks, nullptr).loss;
  };

  GradCheckReport report;
  for (const TensorSpec& s : params.weights.layout()) {
    TensorCheck check;
    check.name = std::string(s.name);
    auto w = params.weights.vec(s.id);
    const auto g = analytic.vec(s.id);
    check.entries = static_cast<std::size_t>(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double saved = w[i];
      w[i] = saved + options.epsilon;
      const double up = loss_at(params);
      w[i] = saved - options.epsilon;
      const double down = loss_at(params);
      w[i] = saved;
      const double numeric = (up - down) / (2.0 * options.epsilon);
      check.max_relative_error =
          std::max(check.max_relative_error, RelativeError(g[i], numeric, options.floor));
      check.max_abs_gradient = std::max(check.max_abs_gradient, std::abs(g[i]));
    }
    report.max_relative_error = std::max(report.max_relative_error, check.max_relative_error);
    report.tensors.push_back(std::move(check));
  }
  return report;
}

void to_json(nlohmann::json& j, const TensorCheck& t) {
  j = {{"name", t.name},
       {"entries", t.entries},
       {"max_relative_error", t.max_relative_error},
       {"max_abs_gradient", t.max_abs_gradient}};
}

void to_json(nlohmann::json& j, const GradCheckReport& r) {
  j = {{"tensors", r.tensors},
       {"max_relative_error", r.max_relative_error},
       {"passed", r.passed()}};
}

}  // namespace artconv
