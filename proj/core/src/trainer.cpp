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

#include "seld/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "seld/error.hpp"
#include "seld/parallel.hpp"
#include "seld/rng.hpp"

namespace seld {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ValidationError("batch size must be positive");
  if (total_steps < 1) throw ValidationError("total steps must be positive");
  if (!(peak_lr > 0.0) || !std::isfinite(peak_lr)) throw ValidationError("peak learning rate must be positive");
  if (!(warmup_frac >= 0.0 && warmup_frac <= 1.0) || !(hold_frac >= 0.0 && hold_frac <= 1.0))
    throw ValidationError("schedule fractions must lie in [0, 1]");
  if (warmup_frac + hold_frac > 1.0 + 1e-12) throw ValidationError("warmup + hold must not exceed 1");
  if (!(decay_floor > 0.0 && decay_floor <= 1.0)) throw ValidationError("decay floor must lie in (0, 1]");
  if (workers < 1) throw ValidationError("workers must be positive");
  if (!(sed_sde_step_scale > 0.0)) throw ValidationError("step scale must be positive");
}

int TrainConfig::steps_for(ReprKind kind) const {
  if (kind != ReprKind::kSedSde) return total_steps;
  return std::max(1, static_cast<int>(std::lround(total_steps * sed_sde_step_scale)));
}

LrSchedule::LrSchedule(double peak, int total_steps, double warmup_frac, double hold_frac, double floor)
    : peak_(peak), floor_(floor), total_(total_steps) {
  if (total_steps < 1) throw ValidationError("schedule needs at least one step");
  warmup_ = static_cast<int>(std::lround(warmup_frac * total_steps));
  hold_ = std::min(total_steps - warmup_, static_cast<int>(std::lround(hold_frac * total_steps)));
}

double LrSchedule::at(int step) const {
  if (step < 0 || step >= total_) throw RangeError("step outside the schedule");
  if (step < warmup_) return peak_ * step / warmup_;
  const int decay_start = warmup_ + hold_;
  if (step < decay_start) return peak_;
  const int span = total_ - 1 - decay_start;
  if (span <= 0) return peak_ * floor_;
  return peak_ * std::pow(floor_, static_cast<double>(step - decay_start) / span);
}

void compute_normalization(const std::vector<TrainExample>& data, std::vector<double>& mean,
                           std::vector<double>& stddev) {
  if (data.empty()) throw ValidationError("cannot compute normalization of an empty dataset");
  const int F = data.front().features.mels();
  const std::size_t plane = static_cast<std::size_t>(kFeatureChannels) * F;
  std::vector<double> sum(plane, 0.0), sq(plane, 0.0);
  double count = 0.0;
  for (const auto& ex : data) {
    if (ex.features.mels() != F) throw ShapeError("examples have different mel counts");
    for (int t = 0; t < ex.features.frames(); ++t)
      for (int ch = 0; ch < kFeatureChannels; ++ch)
        for (int f = 0; f < F; ++f) {
          const double v = ex.features.at(t, ch, f);
          sum[ch * F + f] += v;
          sq[ch * F + f] += v * v;
        }
    count += ex.features.frames();
  }
  mean.assign(plane, 0.0);
  stddev.assign(plane, 1.0);
  for (std::size_t i = 0; i < plane; ++i) {
    mean[i] = sum[i] / count;
    const double var = std::max(0.0, sq[i] / count - mean[i] * mean[i]);
    stddev[i] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }
}

namespace {

void check_dataset(const Model& model, const std::vector<TrainExample>& data) {
  if (data.empty()) throw ValidationError("training set is empty");
  for (const auto& ex : data) {
    if (!(ex.target.format == model.format()))
      throw ValidationError("target format " + ex.target.format.name() + " does not match model format " +
                            model.format().name());
    ex.target.check_shape();
  }
}

LossValue mean_loss(const std::vector<LossValue>& values) {
  LossValue out = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) {
    out.total += values[i].total;
    for (std::size_t k = 0; k < out.components.size(); ++k) out.components[k].value += values[i].components[k].value;
  }
  const double n = static_cast<double>(values.size());
  out.total /= n;
  for (auto& c : out.components) c.value /= n;
  return out;
}

}  // namespace

LossValue evaluate_loss(const Model& model, const std::vector<TrainExample>& data, const LossConfig& cfg,
                        int workers) {
  check_dataset(model, data);
  std::vector<LossValue> values(data.size());
  parallel_for(data.size(), workers, [&](std::size_t i) {
    const auto pred = model.forward(data[i].features, data[i].target.frames());
    values[i] = joint_loss(pred, data[i].target, cfg);
  });
  return mean_loss(values);
}

TrainResult train(Model& model, const std::vector<TrainExample>& data, const TrainConfig& cfg,
                  const std::function<void(const StepRecord&)>& on_step) {
  cfg.validate();
  check_dataset(model, data);
  const int steps = cfg.steps_for(model.format().kind());
  const LrSchedule schedule(cfg.peak_lr, steps, cfg.warmup_frac, cfg.hold_frac, cfg.decay_floor);

  const std::size_t P = model.parameter_count();
  const std::size_t B = static_cast<std::size_t>(cfg.batch_size);
  std::vector<double> m(P, 0.0), v(P, 0.0), grad(P);
  std::vector<std::vector<double>> item_grads(B, std::vector<double>(P));
  std::vector<LossValue> item_loss(B);

  Rng rng(mix_seed(cfg.seed, 0x7472));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  auto next_index = [&] {
    if (cursor == order.size()) {
      for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);
      cursor = 0;
    }
    return order[cursor++];
  };

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  TrainResult result;
  result.history.reserve(steps);
  std::vector<std::size_t> batch(B);
  for (int step = 0; step < steps; ++step) {
    for (auto& b : batch) b = next_index();
    parallel_for(B, cfg.workers, [&](std::size_t i) {
      const auto& ex = data[batch[i]];
      ForwardCache cache;
      const auto pred = model.forward(ex.features, cache, ex.target.frames());
      auto lg = joint_loss_with_gradient(pred, ex.target, cfg.loss);
      item_loss[i] = std::move(lg.value);
      std::fill(item_grads[i].begin(), item_grads[i].end(), 0.0);
      model.backward(cache, lg.gradients, item_grads[i]);
    });

    StepRecord rec{step, schedule.at(step), mean_loss(item_loss)};
    if (!std::isfinite(rec.loss.total))
      throw TrainingError("non-finite loss at step " + std::to_string(step), step);

    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < B; ++i)
      for (std::size_t p = 0; p < P; ++p) grad[p] += item_grads[i][p];
    const double inv_b = 1.0 / static_cast<double>(B);
    const double c1 = 1.0 - std::pow(kBeta1, step + 1);
    const double c2 = 1.0 - std::pow(kBeta2, step + 1);
    auto params = model.parameters();
    for (std::size_t p = 0; p < P; ++p) {
      const double g = grad[p] * inv_b;
      m[p] = kBeta1 * m[p] + (1.0 - kBeta1) * g;
      v[p] = kBeta2 * v[p] + (1.0 - kBeta2) * g * g;
      params[p] -= rec.lr * (m[p] / c1) / (std::sqrt(v[p] / c2) + kEps);
    }
    if (on_step) on_step(rec);
    result.history.push_back(std::move(rec));
  }
  return result;
}

std::string format_step_record(const StepRecord& r) {
  char buf[64];
  std::string out = "step=" + std::to_string(r.step);
  std::snprintf(buf, sizeof buf, " lr=%.6g total=%.6g", r.lr, r.loss.total);
  out += buf;
  for (const auto& c : r.loss.components) {
    std::snprintf(buf, sizeof buf, " %s=%.6g", c.name.c_str(), c.value);
    out += buf;
  }
  return out;
}

}  // namespace seld
