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

#ifndef SELD_TRAINER_HPP_
#define SELD_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "seld/features.hpp"
#include "seld/losses.hpp"
#include "seld/model.hpp"
#include "seld/representations.hpp"

namespace seld {

struct TrainConfig {
  int batch_size = 8;
  int total_steps = 2000;
  double peak_lr = 1e-3;
  double warmup_frac = 0.1;
  double hold_frac = 0.4;
  double decay_floor = 0.05;
  std::uint64_t seed = 0;
  LossConfig loss;
  int workers = 1;
  // Step count multiplier applied when training a SED-SDE model
  // (100k / 360k reproduces the original schedule ratio).
  double sed_sde_step_scale = 1.0;

  void validate() const;
  int steps_for(ReprKind kind) const;
};

// Linear warmup from 0, constant hold, then exponential decay reaching
// floor * peak at the last step.
class LrSchedule {
 public:
  LrSchedule(double peak, int total_steps, double warmup_frac, double hold_frac, double floor);

  double at(int step) const;
  int warmup_steps() const { return warmup_; }
  int hold_steps() const { return hold_; }
  int total_steps() const { return total_; }

 private:
  double peak_, floor_;
  int total_, warmup_, hold_;
};

struct TrainExample {
  SpectralFeatures features;
  TargetTensor target;
};

struct StepRecord {
  int step = 0;
  double lr = 0.0;
  LossValue loss;  // mean over the batch
};

struct TrainResult {
  std::vector<StepRecord> history;
};

// Per (feature channel, mel bin) mean and standard deviation over all frames.
void compute_normalization(const std::vector<TrainExample>& data, std::vector<double>& mean,
                           std::vector<double>& stddev);

// Mean loss over a dataset, without updating the model.
LossValue evaluate_loss(const Model& model, const std::vector<TrainExample>& data,
                        const LossConfig& cfg, int workers = 1);

// Adam (0.9, 0.999, 1e-8) on mini-batches drawn from per-epoch shuffles.
// Results do not depend on `workers`. Throws TrainingError on a non-finite
// loss. `on_step` is called after every update.
TrainResult train(Model& model, const std::vector<TrainExample>& data, const TrainConfig& cfg,
                  const std::function<void(const StepRecord&)>& on_step = {});

// "step=12 lr=0.001 total=0.52 sed=0.69 doa=0.45"
std::string format_step_record(const StepRecord& r);

}  // namespace seld

#endif  // SELD_TRAINER_HPP_
