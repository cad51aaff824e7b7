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

#include "seld/features.hpp"
#include "seld/simulator.hpp"

namespace {

seld::AudioClip scene_audio(double seconds) {
  seld::SceneSpec spec;
  spec.duration = seconds;
  spec.n_events = 2;
  return seld::render(spec).audio;
}

void BM_Stft(benchmark::State& state) {
  const auto audio = scene_audio(static_cast<double>(state.range(0)));
  const seld::StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(seld::stft(audio, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(audio.num_samples()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
  const auto audio = scene_audio(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(seld::extract(audio));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(audio.num_samples()));
}
BENCHMARK(BM_Extract)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  seld::SceneSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(seld::render(spec));
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

}  // namespace
