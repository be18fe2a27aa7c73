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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "artconv/corpus.h"
#include "artconv/dsp.h"
#include "artconv/net.h"
#include "artconv/train.h"

namespace artconv {
namespace {

Eigen::MatrixXd RandomFrames(int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, kFeatureDim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

void BM_Mfcc(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 0.1);
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(state.range(0)));
  for (double& s : w.samples) s = normal(rng);
  const MfccExtractor extractor;
  for (auto _ : state) benchmark::DoNotOptimize(ExtractFeatures(w, extractor));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mfcc)->Arg(16000)->Arg(64000);

void BM_Embed(benchmark::State& state) {
  const ModelParams params = InitParams({}, 1);
  const int frames = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = RandomFrames(frames, 2);
  for (auto _ : state) benchmark::DoNotOptimize(EmbedUtterance(params, {&x, frames}));
}
BENCHMARK(BM_Embed)->Arg(100)->Arg(300);

void BM_ForwardBackward(benchmark::State& state) {
  const ModelParams params = InitParams({}, 1);
  const int batch_size = static_cast<int>(state.range(0));
  std::vector<Eigen::MatrixXd> frames;
  for (int i = 0; i < 2 * batch_size; ++i) frames.push_back(RandomFrames(200, 10 + i));
  std::vector<PairInput> batch;
  for (int i = 0; i < batch_size; ++i) {
    batch.push_back({{&frames[2 * i], 200}, {&frames[2 * i + 1], 180}, i % 2});
  }
  std::mt19937_64 rng(3);
  const DropoutMasks masks = DrawDropoutMasks(100, 2 * batch_size, 0.2, rng);
  Gradients grads(params.dims());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ForwardBackward(params, batch, {Mode::kTrain, 0.2, 1e-5}, masks, &grads));
  }
  state.SetItemsProcessed(state.iterations() * batch_size);
}
BENCHMARK(BM_ForwardBackward)->Arg(8)->Arg(32)->UseRealTime();

void BM_SoloPairs(benchmark::State& state) {
  CorpusManifest m;
  for (int d = 0; d < 29; ++d) {
    const std::string a = "P" + std::to_string(2 * d), b = "P" + std::to_string(2 * d + 1);
    m.speakers.push_back({a, {}});
    m.speakers.push_back({b, {}});
    m.dyads.push_back({"D" + std::to_string(d), a, b});
    for (const std::string& s : {a, b}) {
      for (int k = 1; k <= 80; ++k) {
        UtteranceRecord u;
        u.speaker_id = s;
        u.sentence_index = k;
        m.utterances.push_back(u);
      }
    }
  }
  m.Validate();
  for (auto _ : state) benchmark::DoNotOptimize(BuildSoloPairs(m, {1, 40}));
}
BENCHMARK(BM_SoloPairs);

}  // namespace
}  // namespace artconv

BENCHMARK_MAIN();
