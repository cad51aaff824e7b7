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

#include "seld/metrics.hpp"
#include "seld/rng.hpp"

namespace {

seld::Clip random_clip(seld::Rng& rng, int classes, int frames) {
  std::vector<seld::EventAnnotation> events;
  for (int t = 0; t < frames; ++t)
    for (int c = 0; c < classes; ++c) {
      if (rng.uniform() > 0.3) continue;
      const int n = rng.uniform_int(1, 3);
      for (int s = 0; s < n; ++s) {
        seld::EventAnnotation e;
        e.frame = t;
        e.class_id = c;
        e.source = s;
        e.doa = seld::Vec3::from_spherical(rng.uniform(-3.1, 3.1), rng.uniform(-0.7, 0.7));
        e.distance = rng.uniform(0.5, 5.0);
        events.push_back(e);
      }
    }
  return seld::Clip(seld::ClassMap::with_count(classes), seld::FrameGrid::from_frames(frames), events);
}

void BM_MatchAndCount(benchmark::State& state) {
  seld::Rng rng(3);
  const int frames = static_cast<int>(state.range(0));
  const auto gt = random_clip(rng, 13, frames);
  const auto pred = random_clip(rng, 13, frames);
  for (auto _ : state) benchmark::DoNotOptimize(seld::match_and_count(gt, pred, {}));
  state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_MatchAndCount)->Arg(100)->Arg(600);

void BM_Assignment(benchmark::State& state) {
  seld::Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  std::vector<double> cost(n * n);
  for (auto& c : cost) c = rng.uniform(0.0, 180.0);
  for (auto _ : state) benchmark::DoNotOptimize(seld::solve_assignment(cost, n, n));
}
BENCHMARK(BM_Assignment)->Arg(3)->Arg(16)->Arg(64);

}  // namespace
