// Copyright 2026 The seld3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "seld/losses.hpp"
#include "seld/model.hpp"
#include "seld/rng.hpp"

namespace {

seld::SpectralFeatures random_features(int frames) {
  seld::Rng rng(1);
  seld::SpectralFeatures f(frames, 64);
  for (auto& v : f.data()) v = rng.uniform(-1.0, 1.0);
  return f;
}

seld::ModelConfig config(seld::ReprKind kind) {
  seld::ModelConfig cfg;
  cfg.format = seld::ReprFormat(kind, 13);
  return cfg;
}

void BM_Forward(benchmark::State& state) {
  const seld::Model model(config(seld::ReprKind::kSedDoaSde), 1);
  const auto features = random_features(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(features));
}
BENCHMARK(BM_Forward)->Arg(149)->Arg(499)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  const seld::Model model(config(seld::ReprKind::kSedDoaSde), 1);
  const auto features = random_features(static_cast<int>(state.range(0)));
  seld::ForwardCache cache;
  std::vector<double> grads(model.parameter_count());
  for (auto _ : state) {
    const auto out = model.forward(features, cache);
    const seld::TargetTensor gt(out.format, out.frames());
    const auto lg = seld::joint_loss_with_gradient(out, gt, seld::LossConfig{});
    model.backward(cache, lg.gradients, grads);
    benchmark::DoNotOptimize(grads.data());
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(149)->Arg(499)->Unit(benchmark::kMillisecond);

}  // namespace
