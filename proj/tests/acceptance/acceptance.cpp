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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../support.hpp"
#include "seld/augmentation.hpp"
#include "seld/error.hpp"
#include "seld/losses.hpp"
#include "seld/metrics.hpp"
#include "seld/model.hpp"
#include "seld/simulator.hpp"
#include "seld/trainer.hpp"

namespace seld {
namespace {

using testing::random_activity;
using testing::random_matrix;

constexpr double kScoreTol = 5e-4;
constexpr double kLossTol = 1e-9;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradFloor = 1e-6;
constexpr double kCodecTol = 1e-6;
constexpr double kMetricTol = 1e-9;
constexpr double kDoaTolDeg = 1.0;
constexpr double kGainRatioTol = 0.01;
constexpr double kLossRatioMax = 0.1;
constexpr double kF1Min = 0.8;
constexpr double kDoaeMaxDeg = 10.0;
constexpr double kRdeMax = 0.2;

constexpr double kShortBudgetSec = 60.0;
constexpr double kMediumBudgetSec = 120.0;
constexpr double kTrainingBudgetSec = 900.0;

const ReprKind kAllKinds[] = {ReprKind::kMultiAccdoa, ReprKind::kSedDoa, ReprKind::kSedSde, ReprKind::kSedSce,
                              ReprKind::kSedDoaSde};

struct Outcome {
  bool pass = true;
  std::string detail;
  int failures = 0;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures++ == 0) first_failure = what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1 ----

Outcome score_arithmetic() {
  Outcome o;
  struct Row {
    double f1, doae, rde, expected;
  };
  const Row seld_rows[] = {{0.44, 16.7, 0.32, 0.324}, {0.46, 15.3, 0.26, 0.295}, {0.45, 15.6, 0.27, 0.302},
                           {0.53, 14.6, 0.23, 0.260}, {0.59, 12.9, 0.23, 0.237}};
  const Row sde_rows[] = {{0.62, 0, 0.26, 0.320}, {0.57, 0, 0.23, 0.330}, {0.58, 0, 0.26, 0.340}};
  double worst = 0.0;
  for (const auto& r : seld_rows) {
    const double err = std::abs(seld_score(r.f1, r.doae, r.rde) - r.expected);
    worst = std::max(worst, err);
    o.check(err <= kScoreTol, "seld row f1=" + fmt("%.2f", r.f1));
  }
  for (const auto& r : sde_rows) {
    const double err = std::abs(sed_sde_score(r.f1, r.rde) - r.expected);
    worst = std::max(worst, err);
    o.check(err <= kScoreTol, "sed-sde row f1=" + fmt("%.2f", r.f1));
  }
  o.detail = "8 rows, max |error| " + fmt("%.2e", worst);
  return o;
}

// ---- 2 ----

double oracle_joint(const TargetTensor& p, const TargetTensor& g, const LossConfig& cfg) {
  const auto& w = cfg.weights;
  const auto sde_kind = cfg.sde_kind == SdeLossKind::kMse    ? oracle::Sde::kMse
                        : cfg.sde_kind == SdeLossKind::kMspe ? oracle::Sde::kMspe
                                                             : oracle::Sde::kMape;
  const auto& a = g.branches[0];
  switch (p.format.kind()) {
    case ReprKind::kMultiAccdoa:
      return oracle::mse_all(p.branches[0], g.branches[0]);
    case ReprKind::kSedDoa:
      return w.beta[0] * oracle::bce(p.branches[0], a) +
             w.beta[1] * oracle::masked_vector(p.branches[1], g.branches[1], a);
    case ReprKind::kSedSde:
      return w.gamma[0] * oracle::bce(p.branches[0], a) +
             w.gamma[1] * oracle::sde(sde_kind, p.branches[1], g.branches[1], a);
    case ReprKind::kSedSce:
      return w.eta[0] * oracle::bce(p.branches[0], a) +
             w.eta[1] * oracle::masked_vector(p.branches[1], g.branches[1], a);
    case ReprKind::kSedDoaSde:
      return w.lambda[0] * oracle::bce(p.branches[0], a) +
             w.lambda[1] * oracle::masked_vector(p.branches[1], g.branches[1], a) +
             w.lambda[2] * oracle::sde(sde_kind, p.branches[2], g.branches[2], a);
  }
  return 0.0;
}

// Random prediction in the output range of each branch, distances kept away
// from the targets so that the absolute-error loss is differentiable.
TargetTensor random_prediction(Rng& rng, const TargetTensor& gt) {
  TargetTensor pred(gt.format, gt.frames());
  for (int q = 0; q < gt.format.branch_count(); ++q) {
    auto& b = pred.branches[q];
    const int T = static_cast<int>(b.rows()), N = static_cast<int>(b.cols());
    switch (gt.format.activation(q)) {
      case Activation::kSigmoid: b = random_matrix(rng, T, N, 0.02, 0.98); break;
      case Activation::kReLU: b = random_matrix(rng, T, N, 0.0, 6.0); break;
      default: b = random_matrix(rng, T, N, -1.0, 1.0); break;
    }
    if (gt.format.role(q) == BranchRole::kSde)
      for (Eigen::Index i = 0; i < b.size(); ++i)
        if (std::abs(b.data()[i] - gt.branches[q].data()[i]) < 1e-2) b.data()[i] += 0.05;
  }
  return pred;
}

Outcome loss_correctness() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  double worst_value = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int T = rng.uniform_int(1, 8), C = rng.uniform_int(1, 5);
    const auto a = random_activity(rng, T, C, 0.5);
    const auto pa = random_matrix(rng, T, C, -0.1, 1.1);
    const auto pr = random_matrix(rng, T, 3 * C, -1, 1);
    const auto gr = random_matrix(rng, T, 3 * C, -1, 1);
    const auto pd = random_matrix(rng, T, C, 0.0, 6.0);
    const auto gd = random_matrix(rng, T, C, 0.3, 6.0);
    const auto pm = random_matrix(rng, T, 12 * C, -1, 1);
    const auto gm = random_matrix(rng, T, 12 * C, -1, 1);
    const double diffs[] = {
        bce_sed(pa, a) - oracle::bce(pa, a),
        mse_doa(pr, gr, a) - oracle::masked_vector(pr, gr, a),
        sce_loss(pr, gr, a) - oracle::masked_vector(pr, gr, a),
        sde_loss(SdeLossKind::kMse, pd, gd, a) - oracle::sde(oracle::Sde::kMse, pd, gd, a),
        sde_loss(SdeLossKind::kMspe, pd, gd, a) - oracle::sde(oracle::Sde::kMspe, pd, gd, a),
        sde_loss(SdeLossKind::kMape, pd, gd, a) - oracle::sde(oracle::Sde::kMape, pd, gd, a),
        accdoa_mse(pm, gm) - oracle::mse_all(pm, gm),
    };
    for (double d : diffs) {
      worst_value = std::max(worst_value, std::abs(d));
      o.check(std::abs(d) <= kLossTol, "scalar loss, trial " + std::to_string(trial));
    }
    const ReprKind kind = kAllKinds[trial % 5];
    const Clip clip = testing::random_clip(rng, C, T, kind == ReprKind::kMultiAccdoa ? 3 : 1, 0.5);
    const auto gt = encode(clip, kind);
    const auto pred = random_prediction(rng, gt);
    LossConfig cfg;
    cfg.sde_kind = static_cast<SdeLossKind>(trial % 3);
    const double d = joint_loss(pred, gt, cfg).total - oracle_joint(pred, gt, cfg);
    worst_value = std::max(worst_value, std::abs(d));
    o.check(std::abs(d) <= kLossTol, "joint loss, trial " + std::to_string(trial));
  }

  double worst_grad = 0.0;
  long compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ReprKind kind = kAllKinds[trial % 5];
    const int T = rng.uniform_int(1, 4), C = rng.uniform_int(1, 3);
    const Clip clip = testing::random_clip(rng, C, T, kind == ReprKind::kMultiAccdoa ? 3 : 1, 0.6);
    const auto gt = encode(clip, kind);
    const auto pred = random_prediction(rng, gt);
    LossConfig cfg;
    cfg.sde_kind = static_cast<SdeLossKind>(trial % 3);
    cfg.weights.beta = {rng.uniform(0.05, 2), rng.uniform(0.05, 2)};
    cfg.weights.gamma = {rng.uniform(0.05, 2), rng.uniform(0.05, 2)};
    cfg.weights.eta = {rng.uniform(0.05, 2), rng.uniform(0.05, 2)};
    cfg.weights.lambda = {rng.uniform(0.05, 2), rng.uniform(0.05, 2), rng.uniform(0.05, 2)};
    const auto lg = joint_loss_with_gradient(pred, gt, cfg);
    for (int q = 0; q < gt.format.branch_count(); ++q) {
      const auto numeric = testing::numeric_gradient(
          [&](const Matrix& x) {
            auto p = pred;
            p.branches[q] = x;
            return joint_loss(p, gt, cfg).total;
          },
          pred.branches[q], 1e-6);
      for (Eigen::Index i = 0; i < numeric.size(); ++i) {
        const double an = lg.gradients[q].data()[i], nu = numeric.data()[i];
        if (std::max(std::abs(an), std::abs(nu)) <= kGradFloor) continue;
        ++compared;
        const double rel = testing::relative_error(an, nu);
        worst_grad = std::max(worst_grad, rel);
        o.check(rel <= kGradRelTol, "gradient, config " + std::to_string(trial) + " (" + repr_kind_name(kind) + ")");
      }
    }
  }
  const double sec = seconds_since(t0);
  o.check(sec <= kShortBudgetSec, "runtime");
  o.detail = "500 tensors, max |loss - oracle| " + fmt("%.1e", worst_value) + "; 200 configs, " +
             std::to_string(compared) + " partials, max rel err " + fmt("%.1e", worst_grad) + "; " +
             fmt("%.1f s", sec);
  return o;
}

// ---- 3 ----

Outcome codec_round_trip() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(7);
  long annotations = 0, poly3 = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ReprKind kind = kAllKinds[trial % 5];
    const bool multi = kind == ReprKind::kMultiAccdoa;
    const int C = rng.uniform_int(1, 6), T = rng.uniform_int(1, 30);
    const Clip clip = testing::random_clip(rng, C, T, multi ? 3 : 1, rng.uniform(0.1, 0.8),
                                           kind != ReprKind::kSedSde, kind != ReprKind::kSedDoa);
    if (clip.max_polyphony_per_class() == 3) ++poly3;
    const Clip ref = clip.sorted();
    const Clip got = decode(encode(clip, kind), {}, clip.classes(), clip.grid()).sorted();
    const std::string where = repr_kind_name(kind) + " clip " + std::to_string(trial);
    if (got.events().size() != ref.events().size()) {
      o.check(false, where + ": event count");
      continue;
    }
    for (std::size_t i = 0; i < ref.events().size(); ++i) {
      const auto& a = ref.events()[i];
      const auto& b = got.events()[i];
      ++annotations;
      bool ok = a.frame == b.frame && a.class_id == b.class_id;
      ok = ok && b.activity == a.activity;
      ok = ok && a.doa.has_value() == b.doa.has_value() && a.distance.has_value() == b.distance.has_value();
      if (ok && a.doa) ok = (*a.doa - *b.doa).norm() <= kCodecTol;
      if (ok && a.distance) ok = std::abs(*a.distance - *b.distance) <= kCodecTol;
      o.check(ok, where);
    }
  }
  const double sec = seconds_since(t0);
  o.check(poly3 > 0, "no clip reached three-event polyphony");
  o.check(sec <= kShortBudgetSec, "runtime");
  o.detail = "1000 clips, " + std::to_string(annotations) + " annotations, " + std::to_string(poly3) +
             " with 3-event polyphony; " + fmt("%.1f s", sec);
  return o;
}

// ---- 4 ----

Outcome metric_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int C = rng.uniform_int(1, 3), T = rng.uniform_int(1, 10);
    const Clip gt = testing::random_clip(rng, C, T, 2, 0.5);
    const Clip pred = testing::random_clip(rng, C, T, 2, 0.5);
    MetricThresholds thr;
    thr.angular_deg = rng.uniform(10.0, 120.0);
    thr.relative_distance = rng.uniform(0.2, 1.5);
    thr.use_angular = trial % 3 != 2;
    thr.use_distance = trial % 3 != 1;
    const auto counts = match_and_count(gt, pred, thr);
    const auto ref = oracle::match(gt, pred, thr.angular_deg, thr.relative_distance, thr.use_angular,
                                   thr.use_distance);
    const auto report = make_report(counts, thr);
    const std::string where = "scene " + std::to_string(trial);
    o.check(counts.tp == ref.tp && counts.fp == ref.fp && counts.fn == ref.fn, where + ": counts");
    const bool any = !gt.events().empty() || !pred.events().empty();
    double d = std::abs(report.f1 - ref.f1());
    if (thr.use_angular) {
      const double expected = ref.pairs > 0 ? ref.angle_sum / ref.pairs : (any ? 180.0 : 0.0);
      d = std::max(d, report.doae_deg ? std::abs(*report.doae_deg - expected) : 1e9);
    }
    if (thr.use_distance) {
      const double expected = ref.pairs > 0 ? ref.rde_sum / ref.pairs : (any ? 1.0 : 0.0);
      d = std::max(d, report.rde ? std::abs(*report.rde - expected) : 1e9);
    }
    worst = std::max(worst, d);
    o.check(d <= kMetricTol, where + ": F1/DOAE/RDE");
  }
  const double sec = seconds_since(t0);
  o.check(sec <= kShortBudgetSec, "runtime");
  o.detail = "500 scenes, max |metric - oracle| " + fmt("%.1e", worst) + "; " + fmt("%.1f s", sec);
  return o;
}

// ---- 5 ----

double rms(const AudioClip& clip) {
  double s = 0.0;
  for (int ch = 0; ch < kFoaChannels; ++ch)
    for (double v : clip.channel(ch)) s += v * v;
  return std::sqrt(s / (kFoaChannels * clip.num_samples()));
}

Vec3 random_direction(Rng& rng) {
  return Vec3::from_spherical(rng.uniform(-kPi, kPi), deg_to_rad(rng.uniform(-60.0, 60.0)));
}

Outcome physics_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(5);
  double worst_angle = 0.0, worst_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 doa = random_direction(rng);
    const double d = rng.uniform(0.5, 4.0);
    const auto near = testing::render_single_source(1000 + i, doa, d);
    const auto far = testing::render_single_source(1000 + i, doa, 2 * d);
    const double angle = angular_distance_deg(estimate_doa(extract(near.audio)), doa);
    const double ratio = rms(near.audio) / rms(far.audio);
    worst_angle = std::max(worst_angle, angle);
    worst_ratio = std::max(worst_ratio, std::abs(ratio - 2.0) / 2.0);
    o.check(angle <= kDoaTolDeg, "scene " + std::to_string(i) + ": DOA");
    o.check(std::abs(ratio - 2.0) <= 2.0 * kGainRatioTol, "scene " + std::to_string(i) + ": gain");
  }
  const double sec = seconds_since(t0);
  o.check(sec <= kMediumBudgetSec, "runtime");
  o.detail = "100 scenes, max DOA error " + fmt("%.3f deg", worst_angle) + ", max gain deviation " +
             fmt("%.2e", worst_ratio) + "; " + fmt("%.1f s", sec);
  return o;
}

// ---- 6 ----

Outcome acs_consistency() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(6);
  double worst = 0.0;
  const auto variants = AcsVariant::all();
  for (int i = 0; i < 50; ++i) {
    const auto scene = testing::render_single_source(2000 + i, random_direction(rng), rng.uniform(0.5, 4.0));
    for (const auto& v : variants) {
      const Clip labels = acs_labels(scene.labels, v);
      const Vec3 est = estimate_doa(extract(acs_audio(scene.audio, v)));
      const double angle = angular_distance_deg(est, *labels.events().front().doa);
      worst = std::max(worst, angle);
      const std::string where = "scene " + std::to_string(i) + " variant " + std::to_string(v.id());
      o.check(angle <= kDoaTolDeg, where + ": DOA");
      bool same = labels.events().size() == scene.labels.events().size();
      for (std::size_t k = 0; same && k < labels.events().size(); ++k)
        same = labels.events()[k].distance == scene.labels.events()[k].distance;
      o.check(same, where + ": distance");
    }
  }
  const double sec = seconds_since(t0);
  o.check(sec <= kMediumBudgetSec, "runtime");
  o.detail = std::to_string(variants.size()) + " variants x 50 scenes, max DOA error " + fmt("%.3f deg", worst) +
             ", distances bit-identical; " + fmt("%.1f s", sec);
  return o;
}

// ---- 7 ----

struct TrainingSet {
  std::vector<AudioClip> audio;
  std::vector<Clip> labels;
};

TrainingSet training_scenes() {
  SceneSpec tmpl;
  tmpl.seed = 42;
  tmpl.duration = 3.0;
  tmpl.n_events = 3;
  tmpl.min_event_duration = 0.5;
  tmpl.max_event_duration = 1.5;
  TrainingSet set;
  for (int i = 0; i < 20; ++i) {
    auto scene = render(clip_spec(tmpl, i));
    set.audio.push_back(std::move(scene.audio));
    set.labels.push_back(std::move(scene.labels));
  }
  return set;
}

ModelConfig desk_model(ReprKind kind) {
  ModelConfig mc;
  mc.format = ReprFormat(kind, 3);
  mc.stages = {{8, 1, 4}, {16, 1, 4}, {32, 1, 2}};
  mc.seq_hidden = 64;
  mc.head_hidden = 64;
  return mc;
}

TrainConfig desk_training() {
  TrainConfig tc;
  tc.total_steps = 400;
  tc.batch_size = 8;
  tc.peak_lr = 2e-3;
  tc.seed = 3;
  tc.loss.weights.gamma = {0.1, 1.0};
  return tc;
}

MetricThresholds thresholds_for(ReprKind kind) {
  MetricThresholds thr;
  thr.use_angular = kind != ReprKind::kSedSde;
  thr.use_distance = kind != ReprKind::kSedDoa;
  return thr;
}

struct FormatRun {
  Model model;
  double loss_ratio = 0.0;
  MetricsReport report;
  double seconds = 0.0;
};

FormatRun train_format(ReprKind kind, const TrainingSet& set) {
  const auto mc = desk_model(kind);
  std::vector<TrainExample> data;
  for (std::size_t i = 0; i < set.audio.size(); ++i)
    data.push_back({extract(set.audio[i], mc.features), encode(set.labels[i], kind)});
  FormatRun run{Model(mc, 1), 0.0, {}, 0.0};
  std::vector<double> mean, stddev;
  compute_normalization(data, mean, stddev);
  run.model.set_input_normalization(mean, stddev);
  const auto tc = desk_training();
  const auto t0 = std::chrono::steady_clock::now();
  const double before = evaluate_loss(run.model, data, tc.loss).total;
  train(run.model, data, tc);
  run.loss_ratio = evaluate_loss(run.model, data, tc.loss).total / before;
  MetricsAccumulator acc(thresholds_for(kind));
  for (std::size_t i = 0; i < set.audio.size(); ++i)
    acc.add(set.labels[i], predict_clip(run.model, set.audio[i], {}, set.labels[i].classes()));
  run.report = acc.report();
  run.seconds = seconds_since(t0);
  return run;
}

Outcome desk_training_criterion() {
  Outcome o;
  const auto set = training_scenes();
  std::string detail;
  std::vector<FormatRun> runs;
  for (auto kind : kAllKinds) {
    auto run = train_format(kind, set);
    const auto& r = run.report;
    const std::string name = repr_kind_name(kind);
    o.check(run.loss_ratio <= kLossRatioMax, name + ": loss ratio " + fmt("%.3f", run.loss_ratio));
    o.check(r.f1 >= kF1Min, name + ": F1 " + fmt("%.3f", r.f1));
    if (r.doae_deg) o.check(*r.doae_deg <= kDoaeMaxDeg, name + ": DOAE " + fmt("%.2f", *r.doae_deg));
    if (r.rde) o.check(*r.rde <= kRdeMax, name + ": RDE " + fmt("%.3f", *r.rde));
    o.check(run.seconds <= kTrainingBudgetSec, name + ": runtime");
    std::printf("      %-12s loss ratio %.3f  F1 %.3f  DOAE %s  RDE %s  (%.0f s)\n", name.c_str(), run.loss_ratio, r.f1,
                r.doae_deg ? fmt("%.2f", *r.doae_deg).c_str() : "-", r.rde ? fmt("%.3f", *r.rde).c_str() : "-",
                run.seconds);
    std::fflush(stdout);
    runs.push_back(std::move(run));
  }

  const auto& doa = runs[1];
  const auto& sde = runs[2];
  MetricsAccumulator joint(MetricThresholds{});
  for (std::size_t i = 0; i < set.audio.size(); ++i)
    joint.add(set.labels[i], predict_joint(doa.model, sde.model, set.audio[i], {}, set.labels[i].classes()));
  const auto jr = joint.report();
  // Single-model compositions: the field a model cannot predict scores its
  // worst value (DOAE 180 deg, RDE 1).
  const double doa_partial = ((1.0 - doa.report.f1) + *doa.report.doae_deg / 180.0 + 1.0) / 3.0;
  const double sde_partial = ((1.0 - sde.report.f1) + 1.0 + *sde.report.rde) / 3.0;
  o.check(*jr.seld <= std::min(doa_partial, sde_partial), "joint SELD " + fmt("%.3f", *jr.seld));
  o.detail = "5 formats trained; joint SELD " + fmt("%.3f", *jr.seld) + " vs partials " + fmt("%.3f", doa_partial) +
             " / " + fmt("%.3f", sde_partial);
  return o;
}

// ---- 8 ----

Outcome metric_flags() {
  Outcome o;
  Rng rng(8);
  SceneSpec tmpl;
  tmpl.seed = 99;
  tmpl.duration = 5.0;
  tmpl.n_events = 4;
  MetricThresholds doa_only, sde_only;
  doa_only.use_distance = false;
  sde_only.use_angular = false;
  MetricsAccumulator doa_acc(doa_only), sde_acc(sde_only);
  bool doa_needs_distance = false, sde_needs_doa = false;
  for (int i = 0; i < 10; ++i) {
    const Clip gt = render(clip_spec(tmpl, i)).labels;
    std::vector<EventAnnotation> doa_events, sde_events;
    for (auto e : gt.events()) {
      auto d = e;
      d.distance.reset();
      const Vec3 v = *d.doa + testing::random_unit(rng) * 0.05;
      d.doa = v / v.norm();
      doa_events.push_back(d);
      e.doa.reset();
      *e.distance *= rng.uniform(0.95, 1.05);
      sde_events.push_back(e);
    }
    const Clip doa_pred(gt.classes(), gt.grid(), doa_events);
    const Clip sde_pred(gt.classes(), gt.grid(), sde_events);
    try {
      doa_acc.add(gt, doa_pred);
      sde_acc.add(gt, sde_pred);
    } catch (const Error& e) {
      o.check(false, std::string("flagged evaluation raised: ") + e.what());
    }
    try {
      match_and_count(gt, doa_pred, MetricThresholds{});
    } catch (const ValidationError&) {
      doa_needs_distance = true;
    }
    try {
      match_and_count(gt, sde_pred, MetricThresholds{});
    } catch (const ValidationError&) {
      sde_needs_doa = true;
    }
  }
  const auto dr = doa_acc.report();
  const auto sr = sde_acc.report();
  o.check(dr.doae_deg.has_value() && !dr.rde.has_value(), "SED-DOA report fields");
  o.check(!sr.doae_deg.has_value() && sr.rde.has_value(), "SED-SDE report fields");
  o.check(dr.f1 == 1.0 && sr.f1 == 1.0, "perturbed predictions should all match");
  o.check(dr.doae_deg && std::isfinite(*dr.doae_deg) && *dr.doae_deg > 0.0, "SED-DOA DOAE");
  o.check(sr.rde && std::isfinite(*sr.rde) && *sr.rde > 0.0, "SED-SDE RDE");
  o.check(doa_needs_distance && sde_needs_doa, "full metric should reject the missing field");
  o.detail = "SED-DOA: F1 " + fmt("%.3f", dr.f1) + ", DOAE " + fmt("%.2f deg", dr.doae_deg.value_or(-1)) +
             "; SED-SDE: F1 " + fmt("%.3f", sr.f1) + ", RDE " + fmt("%.4f", sr.rde.value_or(-1));
  return o;
}

}  // namespace
}  // namespace seld

int main() {
  using seld::Outcome;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"score arithmetic", seld::score_arithmetic},
      {"loss correctness", seld::loss_correctness},
      {"codec round trip", seld::codec_round_trip},
      {"metric oracle equivalence", seld::metric_oracle},
      {"physics oracle", seld::physics_oracle},
      {"ACS consistency", seld::acs_consistency},
      {"desk-scale training", seld::desk_training_criterion},
      {"metric variant flags", seld::metric_flags},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures = 1;
      o.first_failure = std::string("exception: ") + e.what();
    }
    std::printf("%s %d %s: %s", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    if (!o.pass) std::printf(" [%d failures; first: %s]", o.failures, o.first_failure.c_str());
    std::printf("\n");
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
