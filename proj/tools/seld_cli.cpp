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


// seld: command-line front end for simulation, feature extraction, training,
// prediction and evaluation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seld/augmentation.hpp"
#include "seld/error.hpp"
#include "seld/file_io.hpp"
#include "seld/label_io.hpp"
#include "seld/metrics.hpp"
#include "seld/model.hpp"
#include "seld/parallel.hpp"
#include "seld/simulator.hpp"
#include "seld/trainer.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

// Inputs given as directories expand to their files with `ext`, sorted by name.
std::vector<fs::path> collect(const std::vector<std::string>& inputs, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ext) found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      out.push_back(p);
    } else {
      throw seld::IoError("no such file or directory: '" + in + "'");
    }
  }
  return out;
}

std::vector<seld::AcsVariant> parse_variants(const std::string& text) {
  std::vector<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        ids.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        if (hi < lo) throw seld::ValidationError("empty variant range '" + item + "'");
        for (int i = lo; i <= hi; ++i) ids.push_back(i);
      }
    } catch (const std::logic_error&) {
      throw seld::ValidationError("bad variant list '" + text + "'");
    }
  }
  if (ids.empty()) throw seld::ValidationError("no ACS variants given");
  std::vector<seld::AcsVariant> out;
  for (int id : ids) out.emplace_back(id);
  return out;
}

seld::ClassMap class_map(const std::vector<std::string>& names, int count) {
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != count)
      throw seld::ValidationError("--class-names lists " + std::to_string(names.size()) +
                                  " names but the model has " + std::to_string(count) + " classes");
    return seld::ClassMap(names);
  }
  return seld::ClassMap::with_count(count);
}

seld::Clip read_manifest_labels(const fs::path& dir, const seld::Manifest& m, const seld::ManifestEntry& e) {
  return seld::read_label_file(dir / e.labels, seld::FrameGrid::from_duration(e.duration, m.label_hop),
                               m.classes());
}

// ---- simulate ----

struct SimulateOpts {
  std::string out;
  int clips = 20;
  std::uint64_t seed = 0;
  double duration = 10.0;
  int events = 8;
  int classes = 3;
  double d_min = 1.0;
  double d_max = 4.0;
  int polyphony = 2;
  std::string source = "noise";
  double min_event = 0.5;
  double max_event = 2.0;
  double max_elevation = 45.0;
  bool moving = false;
  bool same_class_overlap = false;
};

int run_simulate(const SimulateOpts& o, int workers) {
  seld::SceneSpec spec;
  spec.seed = o.seed;
  spec.duration = o.duration;
  spec.n_events = o.events;
  spec.classes = seld::ClassMap::with_count(o.classes);
  spec.d_min = o.d_min;
  spec.d_max = o.d_max;
  spec.polyphony_max = o.polyphony;
  spec.source_kind = seld::parse_source_kind(o.source);
  spec.min_event_duration = o.min_event;
  spec.max_event_duration = o.max_event;
  spec.max_elevation_deg = o.max_elevation;
  spec.moving_sources = o.moving;
  spec.allow_same_class_overlap = o.same_class_overlap;
  spec.validate();
  if (o.clips < 0) throw seld::ValidationError("--clips must be >= 0");
  const auto manifest = seld::render_dataset(spec, o.clips, o.out, workers);
  std::cout << "wrote " << manifest.entries.size() << " clips to " << o.out << "\n";
  return 0;
}

// ---- augment ----

struct AugmentOpts {
  std::string in;
  std::string out;
  std::string variants = "0..7";
};

int run_augment(const AugmentOpts& o, int workers) {
  const fs::path in(o.in), out(o.out);
  const auto variants = parse_variants(o.variants);
  const auto manifest = seld::read_manifest(in / seld::kManifestName);
  seld::Manifest result{manifest.class_names, manifest.label_hop, {}};
  const std::size_t n = manifest.entries.size() * variants.size();
  result.entries.resize(n);
  seld::parallel_for(n, workers, [&](std::size_t i) {
    const auto& entry = manifest.entries[i / variants.size()];
    const auto& v = variants[i % variants.size()];
    const auto audio = seld::read_wav(in / entry.audio);
    const auto labels = read_manifest_labels(in, manifest, entry);
    const std::string suffix = "_acs" + std::to_string(v.id());
    const std::string wav = fs::path(entry.audio).stem().string() + suffix + ".wav";
    const std::string csv = fs::path(entry.labels).stem().string() + suffix + ".csv";
    seld::write_wav(out / wav, seld::acs_audio(audio, v));
    seld::write_label_file(out / csv, seld::acs_labels(labels, v));
    result.entries[i] = {wav, csv, entry.duration};
  });
  seld::write_file_atomic(out / seld::kManifestName, seld::write_manifest(result));
  std::cout << "wrote " << n << " clips to " << o.out << "\n";
  return 0;
}

// ---- extract ----

struct ExtractOpts {
  std::vector<std::string> inputs;
  std::string out;
  int n_mels = 64;
};

int run_extract(const ExtractOpts& o, int workers) {
  seld::StftConfig cfg;
  cfg.n_mels = o.n_mels;
  cfg.validate();
  const auto files = collect(o.inputs, ".wav");
  seld::parallel_for(files.size(), workers, [&](std::size_t i) {
    const auto features = seld::extract(seld::read_wav(files[i]), cfg);
    seld::write_tensor_file(fs::path(o.out) / (files[i].stem().string() + ".feat"), features.to_tensor());
  });
  if (files.empty()) fs::create_directories(o.out);
  std::cout << "extracted " << files.size() << " files to " << o.out << "\n";
  return 0;
}

// ---- train ----

struct TrainOpts {
  std::string data;
  std::string out;
  std::string format = "sed-doa";
  std::string log;
  std::string acs;
  int steps = 2000;
  int batch = 8;
  double lr = 1e-3;
  double warmup = 0.1;
  double hold = 0.4;
  double floor = 0.05;
  double sed_sde_step_scale = 1.0;
  std::uint64_t seed = 0;
  int log_every = 50;
  std::string sde_loss = "mspe";
  std::vector<double> beta{0.1, 1.0};
  std::vector<double> gamma{0.1, 2.0};
  std::vector<double> eta{1.0, 1.0};
  std::vector<double> lambda{0.1, 1.0, 2.0};
  int n_mels = 64;
  std::vector<int> channels{16, 32, 64};
  std::vector<int> freq_pools{4, 4, 2};
  int seq_hidden = 128;
  int seq_kernel = 3;
  int head_hidden = 128;
};

template <std::size_t N>
std::array<double, N> weights(const std::vector<double>& v, const char* flag) {
  if (v.size() != N) throw seld::ValidationError(std::string(flag) + " expects " + std::to_string(N) + " values");
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

int run_train(const TrainOpts& o, int workers) {
  const auto kind = seld::parse_repr_kind(o.format);
  const fs::path dir(o.data);
  const auto manifest = seld::read_manifest(dir / seld::kManifestName);
  if (manifest.entries.empty()) throw seld::ValidationError("training set '" + o.data + "' is empty");

  seld::ModelConfig mc;
  mc.format = seld::ReprFormat(kind, manifest.classes().size());
  mc.features.n_mels = o.n_mels;
  if (o.channels.size() != o.freq_pools.size())
    throw seld::ValidationError("--channels and --freq-pools must have the same length");
  mc.stages.clear();
  for (std::size_t i = 0; i < o.channels.size(); ++i) mc.stages.push_back({o.channels[i], 1, o.freq_pools[i]});
  mc.seq_hidden = o.seq_hidden;
  mc.seq_kernel = o.seq_kernel;
  mc.head_hidden = o.head_hidden;
  mc.time_pool = static_cast<int>(std::lround(manifest.label_hop / mc.features.hop));
  mc.validate();

  seld::TrainConfig tc;
  tc.batch_size = o.batch;
  tc.total_steps = o.steps;
  tc.peak_lr = o.lr;
  tc.warmup_frac = o.warmup;
  tc.hold_frac = o.hold;
  tc.decay_floor = o.floor;
  tc.seed = o.seed;
  tc.workers = workers;
  tc.sed_sde_step_scale = o.sed_sde_step_scale;
  tc.loss.sde_kind = seld::parse_sde_loss_kind(o.sde_loss);
  tc.loss.weights.beta = weights<2>(o.beta, "--beta");
  tc.loss.weights.gamma = weights<2>(o.gamma, "--gamma");
  tc.loss.weights.eta = weights<2>(o.eta, "--eta");
  tc.loss.weights.lambda = weights<3>(o.lambda, "--lambda");
  tc.total_steps = tc.steps_for(kind);
  tc.validate();

  std::vector<seld::AcsVariant> variants{seld::AcsVariant(0)};
  if (!o.acs.empty()) variants = parse_variants(o.acs);
  const std::size_t n = manifest.entries.size() * variants.size();
  std::vector<std::optional<seld::TrainExample>> slots(n);
  seld::parallel_for(n, workers, [&](std::size_t i) {
    const auto& entry = manifest.entries[i / variants.size()];
    const auto& v = variants[i % variants.size()];
    const auto audio = seld::acs_audio(seld::read_wav(dir / entry.audio), v);
    const auto labels = seld::acs_labels(read_manifest_labels(dir, manifest, entry), v);
    slots[i] = seld::TrainExample{seld::extract(audio, mc.features), seld::encode(labels, kind)};
  });
  std::vector<seld::TrainExample> data;
  data.reserve(n);
  for (auto& s : slots) data.push_back(std::move(*s));

  seld::Model model(mc, tc.seed);
  std::vector<double> mean, stddev;
  seld::compute_normalization(data, mean, stddev);
  model.set_input_normalization(mean, stddev);

  std::ofstream log;
  if (!o.log.empty()) {
    log.open(o.log);
    if (!log) throw seld::IoError("cannot open log file '" + o.log + "'");
  }
  const int last = tc.total_steps - 1;
  seld::train(model, data, tc, [&](const seld::StepRecord& r) {
    const auto line = seld::format_step_record(r);
    if (log.is_open()) log << line << "\n";
    if (o.log_every > 0 && (r.step % o.log_every == 0 || r.step == last)) std::cout << line << std::endl;
  });
  model.save_file(o.out);
  std::cout << "saved " << mc.format.name() << " model (" << model.parameter_count() << " parameters) to "
            << o.out << "\n";
  return 0;
}

// ---- predict ----

struct PredictOpts {
  std::vector<std::string> inputs;
  std::string out;
  std::string model;
  std::vector<std::string> joint;
  std::vector<std::string> class_names;
  double sed_threshold = 0.5;
  double accdoa_threshold = 0.5;
  double label_hop = 0.1;
  bool tensors = false;
};

int run_predict(const PredictOpts& o, int workers) {
  if (o.model.empty() == o.joint.empty())
    throw seld::ValidationError("give exactly one of --model or --joint");
  seld::DecodeConfig dc;
  dc.sed_threshold = o.sed_threshold;
  dc.accdoa_threshold = o.accdoa_threshold;
  dc.validate();

  std::vector<seld::Model> models;
  if (!o.model.empty()) {
    models.push_back(seld::Model::load_file(o.model));
  } else {
    for (const auto& p : o.joint) models.push_back(seld::Model::load_file(p));
    if (models[0].format().kind() != seld::ReprKind::kSedDoa || models[1].format().kind() != seld::ReprKind::kSedSde)
      throw seld::ValidationError("--joint expects a sed-doa checkpoint followed by a sed-sde checkpoint");
  }
  const auto classes = class_map(o.class_names, models[0].format().num_classes());
  const auto files = collect(o.inputs, ".wav");
  const fs::path out(o.out);

  seld::Manifest manifest{classes.names(), o.label_hop, {}};
  manifest.entries.resize(files.size());
  seld::parallel_for(files.size(), workers, [&](std::size_t i) {
    const auto audio = seld::read_wav(files[i]);
    const std::string stem = files[i].stem().string();
    seld::Clip clip = models.size() == 2
                          ? seld::predict_joint(models[0], models[1], audio, dc, classes, o.label_hop)
                          : seld::predict_clip(models[0], audio, dc, classes, o.label_hop);
    if (o.tensors && models.size() == 1)
      seld::write_target_tensor_file(out / (stem + ".tgt"), seld::predict_tensor(models[0], audio, o.label_hop));
    seld::write_label_file(out / (stem + ".csv"), clip);
    manifest.entries[i] = {fs::absolute(files[i]).string(), stem + ".csv", audio.duration()};
  });
  seld::write_file_atomic(out / seld::kManifestName, seld::write_manifest(manifest));
  std::cout << "predicted " << files.size() << " files into " << o.out << "\n";
  return 0;
}

// ---- evaluate ----

struct EvaluateOpts {
  std::string pred;
  std::string gt;
  double angular = 20.0;
  double distance = 1.0;
  bool no_angular = false;
  bool no_distance = false;
  int classes = 0;
  double duration = 0.0;
  double label_hop = 0.1;
  std::string format = "table";
};

struct LabelPair {
  fs::path gt, pred;
  std::optional<double> duration;
};

int run_evaluate(const EvaluateOpts& o, int workers) {
  if (o.format != "table" && o.format != "kv") throw seld::ValidationError("--format must be 'table' or 'kv'");
  seld::MetricThresholds thr;
  thr.angular_deg = o.angular;
  thr.relative_distance = o.distance;
  thr.use_angular = !o.no_angular;
  thr.use_distance = !o.no_distance;
  thr.validate();

  const fs::path gt(o.gt), pred(o.pred);
  std::vector<LabelPair> pairs;
  std::optional<seld::Manifest> manifest;
  if (fs::is_directory(gt)) {
    if (!fs::is_directory(pred)) throw seld::ValidationError("--gt is a directory, so --pred must be one too");
    if (fs::exists(gt / seld::kManifestName)) manifest = seld::read_manifest(gt / seld::kManifestName);
    std::map<std::string, double> durations;
    if (manifest)
      for (const auto& e : manifest->entries) durations[fs::path(e.labels).filename().string()] = e.duration;
    for (const auto& p : collect({o.gt}, ".csv")) {
      if (p.filename() == seld::kManifestName) continue;
      const auto name = p.filename().string();
      LabelPair lp{p, pred / name, std::nullopt};
      if (auto it = durations.find(name); it != durations.end()) lp.duration = it->second;
      pairs.push_back(lp);
    }
  } else {
    pairs.push_back({gt, pred, std::nullopt});
  }
  for (const auto& p : pairs)
    if (!fs::is_regular_file(p.pred)) throw seld::IoError("missing prediction file '" + p.pred.string() + "'");

  const double hop = manifest ? manifest->label_hop : o.label_hop;
  // Parse on a generous grid first; the real grid comes from the manifest,
  // --duration, or the last labelled frame.
  const auto loose_grid = seld::FrameGrid::from_frames(1 << 24, hop);
  const auto loose_classes = seld::ClassMap::with_count(o.classes > 0 ? o.classes : 1024);
  std::vector<std::pair<seld::Clip, seld::Clip>> clips(pairs.size(), {{loose_classes, loose_grid}, {loose_classes, loose_grid}});
  seld::parallel_for(pairs.size(), workers, [&](std::size_t i) {
    clips[i] = {seld::parse_labels(seld::read_file(pairs[i].gt), loose_grid, loose_classes),
                seld::parse_labels(seld::read_file(pairs[i].pred), loose_grid, loose_classes)};
  });

  int max_class = -1;
  for (const auto& [g, p] : clips)
    for (const auto* c : {&g, &p})
      for (const auto& e : c->events()) max_class = std::max(max_class, e.class_id);
  seld::ClassMap classes = manifest ? manifest->classes()
                           : o.classes > 0 ? seld::ClassMap::with_count(o.classes)
                                           : seld::ClassMap::with_count(std::max(max_class + 1, 1));

  seld::MetricsAccumulator acc(thr);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [g, p] = clips[i];
    int frames = 0;
    if (pairs[i].duration) {
      frames = seld::FrameGrid::from_duration(*pairs[i].duration, hop).frames;
    } else if (o.duration > 0) {
      frames = seld::FrameGrid::from_duration(o.duration, hop).frames;
    } else {
      for (const auto* c : {&g, &p})
        for (const auto& e : c->events()) frames = std::max(frames, e.frame + 1);
      frames = std::max(frames, 1);
    }
    const auto grid = seld::FrameGrid::from_frames(frames, hop);
    acc.add(seld::Clip(classes, grid, g.events()), seld::Clip(classes, grid, p.events()));
  }
  const auto report = acc.report();
  std::cout << (o.format == "kv" ? seld::format_report_kv(report) : seld::format_report_table(report));
  return 0;
}

// ---- score ----

struct ScoreOpts {
  double f1 = 0.0;
  std::optional<double> doae;
  std::optional<double> rde;
  int precision = 3;
};

int run_score(const ScoreOpts& o) {
  if (!o.rde) throw seld::ValidationError("--rde is required");
  const double value = o.doae ? seld::seld_score(o.f1, *o.doae, *o.rde) : seld::sed_sde_score(o.f1, *o.rde);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", o.precision, value);
  std::cout << (o.doae ? "seld_score " : "sed_sde_score ") << buf << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound event localization and detection with distance estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI file with option defaults, one [section] per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  int workers = 1;
  app.add_option("-j,--workers", workers, "Worker threads for per-file work")->check(CLI::PositiveNumber);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Render a synthetic FOA dataset (WAV + label CSV + manifest)");
  simulate->add_option("-o,--out", sim.out, "Output directory")->required();
  simulate->add_option("--clips", sim.clips, "Number of clips")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--duration", sim.duration, "Clip length in seconds")->capture_default_str();
  simulate->add_option("--events", sim.events, "Events per clip")->capture_default_str();
  simulate->add_option("--classes", sim.classes, "Number of sound classes")->capture_default_str();
  simulate->add_option("--d-min", sim.d_min, "Minimum source distance (m)")->capture_default_str();
  simulate->add_option("--d-max", sim.d_max, "Maximum source distance (m)")->capture_default_str();
  simulate->add_option("--polyphony", sim.polyphony, "Maximum simultaneous events")->capture_default_str();
  simulate->add_option("--source", sim.source, "Source signal: noise or tone")->capture_default_str();
  simulate->add_option("--min-event", sim.min_event, "Shortest event (s)")->capture_default_str();
  simulate->add_option("--max-event", sim.max_event, "Longest event (s)")->capture_default_str();
  simulate->add_option("--max-elevation", sim.max_elevation, "Elevation range (+/- deg)")->capture_default_str();
  simulate->add_flag("--moving", sim.moving, "Sources move linearly during each event");
  simulate->add_flag("--same-class-overlap", sim.same_class_overlap,
                     "Allow up to three overlapping events of one class");

  AugmentOpts aug;
  auto* augment = app.add_subcommand("augment", "Apply audio channel swapping to a dataset");
  augment->add_option("-i,--in", aug.in, "Dataset directory with manifest.csv")->required();
  augment->add_option("-o,--out", aug.out, "Output directory")->required();
  augment->add_option("--variants", aug.variants,
                      "Variant ids, e.g. 0..7 or 0,4,5 (8..15 add an elevation flip)")
      ->capture_default_str();

  ExtractOpts ext;
  auto* extract = app.add_subcommand("extract", "Compute log-mel + intensity-vector feature tensors");
  extract->add_option("inputs", ext.inputs, "WAV files or directories")->required();
  extract->add_option("-o,--out", ext.out, "Output directory for .feat tensors")->required();
  extract->add_option("--n-mels", ext.n_mels, "Mel bins")->capture_default_str();

  TrainOpts tr;
  auto* train = app.add_subcommand("train", "Train a model on a simulated or converted dataset");
  train->add_option("-d,--data", tr.data, "Dataset directory with manifest.csv")->required();
  train->add_option("-o,--out", tr.out, "Checkpoint path")->required();
  train->add_option("--format", tr.format,
                    "Output representation: multi-accdoa, sed-doa, sed-sde, sed-sce, sed-doa-sde")
      ->capture_default_str();
  train->add_option("--steps", tr.steps, "Optimizer steps")->capture_default_str();
  train->add_option("--batch", tr.batch, "Batch size")->capture_default_str();
  train->add_option("--lr", tr.lr, "Peak learning rate")->capture_default_str();
  train->add_option("--warmup", tr.warmup, "Warmup fraction of steps")->capture_default_str();
  train->add_option("--hold", tr.hold, "Constant-rate fraction of steps")->capture_default_str();
  train->add_option("--decay-floor", tr.floor, "Final rate as a fraction of the peak")->capture_default_str();
  train->add_option("--sed-sde-step-scale", tr.sed_sde_step_scale, "Step multiplier for sed-sde models")
      ->capture_default_str();
  train->add_option("--seed", tr.seed, "Initialization and shuffling seed")->capture_default_str();
  train->add_option("--sde-loss", tr.sde_loss, "Distance loss: mse, mspe or mape")->capture_default_str();
  train->add_option("--beta", tr.beta, "sed-doa weights (sed,doa)")->delimiter(',')->expected(2)->capture_default_str();
  train->add_option("--gamma", tr.gamma, "sed-sde weights (sed,sde)")->delimiter(',')->expected(2)->capture_default_str();
  train->add_option("--eta", tr.eta, "sed-sce weights (sed,sce)")->delimiter(',')->expected(2)->capture_default_str();
  train->add_option("--lambda", tr.lambda, "sed-doa-sde weights (sed,doa,sde)")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  train->add_option("--acs", tr.acs, "Expand the training set with these channel-swap variants, e.g. 0..7");
  train->add_option("--n-mels", tr.n_mels, "Mel bins")->capture_default_str();
  train->add_option("--channels", tr.channels, "Channels per convolution stage")->delimiter(',')->capture_default_str();
  train->add_option("--freq-pools", tr.freq_pools, "Frequency pooling per stage")->delimiter(',')->capture_default_str();
  train->add_option("--seq-hidden", tr.seq_hidden, "Sequence layer width")->capture_default_str();
  train->add_option("--seq-kernel", tr.seq_kernel, "Sequence layer kernel (odd)")->capture_default_str();
  train->add_option("--head-hidden", tr.head_hidden, "Hidden width of each output branch")->capture_default_str();
  train->add_option("--log", tr.log, "Write every step record to this file");
  train->add_option("--log-every", tr.log_every, "Print a step record every N steps (0: quiet)")
      ->capture_default_str();

  PredictOpts pr;
  auto* predict = app.add_subcommand("predict", "Run trained models on WAV files and write label CSVs");
  predict->add_option("inputs", pr.inputs, "WAV files or directories")->required();
  predict->add_option("-o,--out", pr.out, "Output directory")->required();
  auto* model_opt = predict->add_option("-m,--model", pr.model, "Checkpoint of a single model");
  predict->add_option("--joint", pr.joint, "sed-doa and sed-sde checkpoints combined into one prediction")
      ->expected(2)
      ->excludes(model_opt);
  predict->add_option("--class-names", pr.class_names, "Class names written to the manifest")->delimiter(',');
  predict->add_option("--sed-threshold", pr.sed_threshold, "Activity threshold")->capture_default_str();
  predict->add_option("--accdoa-threshold", pr.accdoa_threshold, "Vector-norm threshold for multi-accdoa")
      ->capture_default_str();
  predict->add_option("--label-hop", pr.label_hop, "Label frame length (s)")->capture_default_str();
  predict->add_flag("--tensors", pr.tensors, "Also write raw network outputs as .tgt files");

  EvaluateOpts ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted label CSVs against ground truth");
  evaluate->add_option("-p,--pred", ev.pred, "Prediction CSV or directory")->required();
  evaluate->add_option("-g,--gt", ev.gt, "Ground-truth CSV or directory")->required();
  evaluate->add_option("--angular-threshold", ev.angular, "DOA threshold (deg)")->capture_default_str();
  evaluate->add_option("--distance-threshold", ev.distance, "Relative distance threshold")->capture_default_str();
  evaluate->add_flag("--no-angular", ev.no_angular, "Ignore DOA when matching and counting");
  evaluate->add_flag("--no-distance", ev.no_distance, "Ignore distance when matching and counting");
  evaluate->add_option("--classes", ev.classes, "Number of classes (default: manifest or largest index + 1)");
  evaluate->add_option("--duration", ev.duration, "Clip length (s) when no manifest is present");
  evaluate->add_option("--label-hop", ev.label_hop, "Label frame length (s) when no manifest is present")
      ->capture_default_str();
  evaluate->add_option("--format", ev.format, "Output: table or kv")->capture_default_str();

  ScoreOpts sc;
  auto* score = app.add_subcommand("score", "Composite score from F1, DOA error and relative distance error");
  score->add_option("--f1", sc.f1, "F1 score")->required();
  score->add_option("--doae", sc.doae, "DOA error (deg); omit for the sed-sde score");
  score->add_option("--rde", sc.rde, "Relative distance error")->required();
  score->add_option("--precision", sc.precision, "Decimals printed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) return run_simulate(sim, workers);
    if (*augment) return run_augment(aug, workers);
    if (*extract) return run_extract(ext, workers);
    if (*train) return run_train(tr, workers);
    if (*predict) return run_predict(pr, workers);
    if (*evaluate) return run_evaluate(ev, workers);
    if (*score) return run_score(sc);
  } catch (const seld::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
