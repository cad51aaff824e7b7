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

#include "seld/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "seld/error.hpp"
#include "seld/file_io.hpp"
#include "seld/rng.hpp"
#include "seld/tensor_io.hpp"

namespace seld {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// 3x3 "same" convolution patches: row ci*9 + kt*3 + kf, column t*F + f.
Matrix im2col3x3(const Matrix& in, int frames, int mels) {
  const int cin = static_cast<int>(in.rows());
  Matrix cols = Matrix::Zero(cin * 9, static_cast<Eigen::Index>(frames) * mels);
  for (int ci = 0; ci < cin; ++ci) {
    for (int kt = 0; kt < 3; ++kt) {
      for (int kf = 0; kf < 3; ++kf) {
        const int row = ci * 9 + kt * 3 + kf;
        for (int t = 0; t < frames; ++t) {
          const int st = t + kt - 1;
          if (st < 0 || st >= frames) continue;
          for (int f = 0; f < mels; ++f) {
            const int sf = f + kf - 1;
            if (sf < 0 || sf >= mels) continue;
            cols(row, t * mels + f) = in(ci, st * mels + sf);
          }
        }
      }
    }
  }
  return cols;
}

Matrix col2im3x3(const Matrix& cols, int cin, int frames, int mels) {
  Matrix out = Matrix::Zero(cin, static_cast<Eigen::Index>(frames) * mels);
  for (int ci = 0; ci < cin; ++ci) {
    for (int kt = 0; kt < 3; ++kt) {
      for (int kf = 0; kf < 3; ++kf) {
        const int row = ci * 9 + kt * 3 + kf;
        for (int t = 0; t < frames; ++t) {
          const int st = t + kt - 1;
          if (st < 0 || st >= frames) continue;
          for (int f = 0; f < mels; ++f) {
            const int sf = f + kf - 1;
            if (sf < 0 || sf >= mels) continue;
            out(ci, st * mels + sf) += cols(row, t * mels + f);
          }
        }
      }
    }
  }
  return out;
}

// Average pooling with partial windows at the far edges.
Matrix avg_pool(const Matrix& in, int frames, int mels, int pt, int pf) {
  const int out_t = ceil_div(frames, pt);
  const int out_f = ceil_div(mels, pf);
  Matrix out = Matrix::Zero(in.rows(), static_cast<Eigen::Index>(out_t) * out_f);
  for (int ot = 0; ot < out_t; ++ot) {
    const int t1 = std::min(frames, (ot + 1) * pt);
    for (int of = 0; of < out_f; ++of) {
      const int f1 = std::min(mels, (of + 1) * pf);
      const double inv = 1.0 / ((t1 - ot * pt) * (f1 - of * pf));
      for (int t = ot * pt; t < t1; ++t)
        for (int f = of * pf; f < f1; ++f)
          out.col(ot * out_f + of) += in.col(t * mels + f);
      out.col(ot * out_f + of) *= inv;
    }
  }
  return out;
}

Matrix avg_pool_backward(const Matrix& grad_out, int frames, int mels, int pt, int pf) {
  const int out_f = ceil_div(mels, pf);
  Matrix grad_in(grad_out.rows(), static_cast<Eigen::Index>(frames) * mels);
  for (int t = 0; t < frames; ++t) {
    const int ot = t / pt;
    const int t1 = std::min(frames, (ot + 1) * pt);
    for (int f = 0; f < mels; ++f) {
      const int of = f / pf;
      const int f1 = std::min(mels, (of + 1) * pf);
      const double inv = 1.0 / ((t1 - ot * pt) * (f1 - of * pf));
      grad_in.col(t * mels + f) = grad_out.col(ot * out_f + of) * inv;
    }
  }
  return grad_in;
}

// Time window averaged into label frame t.
std::pair<int, int> time_window(int t, int factor, int frames) {
  const int begin = std::min(t * factor, frames - 1);
  const int end = std::max(begin + 1, std::min((t + 1) * factor, frames));
  return {begin, end};
}

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kSigmoid:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    case Activation::kTanh: return std::tanh(z);
    case Activation::kReLU: return z > 0.0 ? z : 0.0;
    case Activation::kLinear: return z;
  }
  return z;
}

// Output-branch derivative. The ReLU branch treats z = 0 as active so that a
// zero-initialized distance head still receives gradient.
double activation_slope(Activation a, double z, double y) {
  switch (a) {
    case Activation::kSigmoid: return y * (1.0 - y);
    case Activation::kTanh: return 1.0 - y * y;
    case Activation::kReLU: return z >= 0.0 ? 1.0 : 0.0;
    case Activation::kLinear: return 1.0;
  }
  return 1.0;
}

}  // namespace

void ModelConfig::validate() const {
  features.validate();
  for (const auto& s : stages)
    if (s.channels < 1 || s.time_pool < 1 || s.freq_pool < 1)
      throw ValidationError("convolution stages need positive channels and pooling factors");
  if (seq_hidden < 1 || head_hidden < 1) throw ValidationError("layer widths must be positive");
  if (seq_kernel < 1 || seq_kernel % 2 == 0) throw ValidationError("sequence kernel must be odd");
  if (time_pool < 1) throw ValidationError("time pooling factor must be positive");
}

int ModelConfig::trunk_mels() const {
  int f = features.n_mels;
  for (const auto& s : stages) f = ceil_div(f, s.freq_pool);
  return f;
}

int ModelConfig::trunk_frames(int input_frames) const {
  int t = input_frames;
  for (const auto& s : stages) t = ceil_div(t, s.time_pool);
  return t;
}

int ModelConfig::output_frames(int input_frames) const {
  return ceil_div(trunk_frames(input_frames), time_pool);
}

Model::Block Model::allocate(int rows, int cols) {
  Block b{params_.size(), rows, cols};
  params_.resize(params_.size() + static_cast<std::size_t>(rows) * cols, 0.0);
  return b;
}

Eigen::Map<const Matrix> Model::view(const Block& b) const {
  return Eigen::Map<const Matrix>(params_.data() + b.offset, b.rows, b.cols);
}

Eigen::Map<Matrix> Model::view(const Block& b, std::span<double> storage) const {
  return Eigen::Map<Matrix>(storage.data() + b.offset, b.rows, b.cols);
}

Model::Model(ModelConfig config, std::uint64_t seed) : config_(std::move(config)) {
  config_.validate();
  Rng rng(seed);
  auto init_uniform = [&](const Block& b, int fan_in) {
    const double bound = std::sqrt(6.0 / fan_in);
    for (std::size_t i = 0; i < static_cast<std::size_t>(b.rows) * b.cols; ++i)
      params_[b.offset + i] = rng.uniform(-bound, bound);
  };

  int cin = kFeatureChannels;
  for (const auto& s : config_.stages) {
    Dense d{allocate(s.channels, cin * 9), allocate(s.channels, 1)};
    init_uniform(d.weight, cin * 9);
    conv_.push_back(d);
    cin = s.channels;
  }
  const int seq_in = cin * config_.trunk_mels() * config_.seq_kernel;
  seq_ = {allocate(config_.seq_hidden, seq_in), allocate(config_.seq_hidden, 1)};
  init_uniform(seq_.weight, seq_in);
  for (int q = 0; q < config_.format.branch_count(); ++q) {
    Dense h1{allocate(config_.head_hidden, config_.seq_hidden), allocate(config_.head_hidden, 1)};
    init_uniform(h1.weight, config_.seq_hidden);
    head1_.push_back(h1);
    head2_.push_back({allocate(config_.format.branch_dim(q), config_.head_hidden),
                      allocate(config_.format.branch_dim(q), 1)});
  }
  const std::size_t plane = static_cast<std::size_t>(kFeatureChannels) * config_.features.n_mels;
  mean_.assign(plane, 0.0);
  stddev_.assign(plane, 1.0);
}

void Model::set_input_normalization(std::vector<double> mean, std::vector<double> stddev) {
  const std::size_t plane = static_cast<std::size_t>(kFeatureChannels) * config_.features.n_mels;
  if (mean.size() != plane || stddev.size() != plane)
    throw ShapeError("normalization statistics must have 7 x n_mels entries");
  for (double s : stddev)
    if (!(s > 0.0)) throw ValidationError("normalization standard deviations must be positive");
  mean_ = std::move(mean);
  stddev_ = std::move(stddev);
}

TargetTensor Model::forward(const SpectralFeatures& features, int out_frames) const {
  ForwardCache cache;
  return forward(features, cache, out_frames);
}

TargetTensor Model::forward(const SpectralFeatures& features, ForwardCache& cache, int out_frames) const {
  const int F = config_.features.n_mels;
  if (features.mels() != F)
    throw ShapeError("features have " + std::to_string(features.mels()) + " mel bins, model expects " +
                     std::to_string(F));
  if (features.frames() < 1) throw ShapeError("features have no frames");
  cache = ForwardCache{};
  cache.input_frames = features.frames();

  int frames = features.frames();
  int mels = F;
  Matrix x(kFeatureChannels, static_cast<Eigen::Index>(frames) * mels);
  for (int ch = 0; ch < kFeatureChannels; ++ch)
    for (int t = 0; t < frames; ++t)
      for (int f = 0; f < mels; ++f)
        x(ch, t * mels + f) = (features.at(t, ch, f) - mean_[ch * F + f]) / stddev_[ch * F + f];

  for (std::size_t s = 0; s < conv_.size(); ++s) {
    const auto& stage = config_.stages[s];
    cache.stage_frames.push_back(frames);
    cache.stage_mels.push_back(mels);
    Matrix cols = im2col3x3(x, frames, mels);
    Matrix pre = view(conv_[s].weight) * cols;
    pre.colwise() += view(conv_[s].bias).col(0);
    const Matrix act = pre.cwiseMax(0.0);
    cache.stage_inputs.push_back(std::move(x));
    cache.stage_cols.push_back(std::move(cols));
    cache.stage_pre.push_back(std::move(pre));
    x = avg_pool(act, frames, mels, stage.time_pool, stage.freq_pool);
    frames = ceil_div(frames, stage.time_pool);
    mels = ceil_div(mels, stage.freq_pool);
  }
  cache.stage_frames.push_back(frames);
  cache.stage_mels.push_back(mels);

  // Sequence layer over the flattened (channel, mel) features.
  const int depth = static_cast<int>(x.rows()) * mels;
  const int k = config_.seq_kernel;
  Matrix cols = Matrix::Zero(static_cast<Eigen::Index>(k) * depth, frames);
  for (int j = 0; j < k; ++j) {
    for (int t = 0; t < frames; ++t) {
      const int src = t + j - k / 2;
      if (src < 0 || src >= frames) continue;
      for (int c = 0; c < x.rows(); ++c)
        for (int f = 0; f < mels; ++f) cols(j * depth + c * mels + f, t) = x(c, src * mels + f);
    }
  }
  Matrix seq_pre = view(seq_.weight) * cols;
  seq_pre.colwise() += view(seq_.bias).col(0);
  const Matrix seq_act = seq_pre.cwiseMax(0.0);

  const int natural = ceil_div(frames, config_.time_pool);
  const int T = out_frames < 0 ? natural : out_frames;
  Matrix pooled = Matrix::Zero(T, config_.seq_hidden);
  for (int t = 0; t < T; ++t) {
    const auto [b, e] = time_window(std::min(t, natural - 1), config_.time_pool, frames);
    for (int tau = b; tau < e; ++tau) pooled.row(t) += seq_act.col(tau).transpose();
    pooled.row(t) /= static_cast<double>(e - b);
  }

  TargetTensor out(config_.format, T);
  for (int q = 0; q < config_.format.branch_count(); ++q) {
    Matrix z1 = pooled * view(head1_[q].weight).transpose();
    z1.rowwise() += view(head1_[q].bias).col(0).transpose();
    Matrix a1 = z1.cwiseMax(0.0);
    Matrix z2 = a1 * view(head2_[q].weight).transpose();
    z2.rowwise() += view(head2_[q].bias).col(0).transpose();
    const Activation act = config_.format.activation(q);
    Matrix y = z2.unaryExpr([act](double z) { return activate(act, z); });
    out.branches[q] = y;
    cache.head_pre1.push_back(std::move(z1));
    cache.head_act1.push_back(std::move(a1));
    cache.head_pre2.push_back(std::move(z2));
    cache.head_out.push_back(std::move(y));
  }
  cache.seq_cols = std::move(cols);
  cache.seq_pre = std::move(seq_pre);
  cache.pooled = std::move(pooled);
  cache.out_frames = T;
  cache.valid = true;
  return out;
}

void Model::backward(const ForwardCache& cache, const std::vector<Matrix>& output_grads,
                     std::span<double> param_grads) const {
  if (!cache.valid) throw Error("backward() called without a forward cache");
  if (param_grads.size() != params_.size()) throw ShapeError("gradient buffer has the wrong size");
  if (static_cast<int>(output_grads.size()) != config_.format.branch_count())
    throw ShapeError("one output gradient per branch is required");

  const int T = cache.out_frames;
  Matrix d_pooled = Matrix::Zero(T, config_.seq_hidden);
  for (int q = 0; q < config_.format.branch_count(); ++q) {
    const Matrix& dy = output_grads[q];
    if (dy.rows() != T || dy.cols() != config_.format.branch_dim(q))
      throw ShapeError("output gradient shape does not match branch " + std::to_string(q));
    const Activation act = config_.format.activation(q);
    const Matrix& z2 = cache.head_pre2[q];
    const Matrix& y = cache.head_out[q];
    Matrix dz2(dy.rows(), dy.cols());
    for (Eigen::Index i = 0; i < dy.size(); ++i)
      dz2.data()[i] = dy.data()[i] * activation_slope(act, z2.data()[i], y.data()[i]);
    view(head2_[q].weight, param_grads) += dz2.transpose() * cache.head_act1[q];
    view(head2_[q].bias, param_grads) += dz2.colwise().sum().transpose();
    Matrix dz1 = dz2 * view(head2_[q].weight);
    dz1 = dz1.cwiseProduct((cache.head_pre1[q].array() > 0.0).cast<double>().matrix());
    view(head1_[q].weight, param_grads) += dz1.transpose() * cache.pooled;
    view(head1_[q].bias, param_grads) += dz1.colwise().sum().transpose();
    d_pooled += dz1 * view(head1_[q].weight);
  }

  const int frames = cache.stage_frames.back();
  const int mels = cache.stage_mels.back();
  const int natural = ceil_div(frames, config_.time_pool);
  Matrix d_seq = Matrix::Zero(config_.seq_hidden, frames);
  for (int t = 0; t < T; ++t) {
    const auto [b, e] = time_window(std::min(t, natural - 1), config_.time_pool, frames);
    for (int tau = b; tau < e; ++tau) d_seq.col(tau) += d_pooled.row(t).transpose() / static_cast<double>(e - b);
  }
  d_seq = d_seq.cwiseProduct((cache.seq_pre.array() > 0.0).cast<double>().matrix());
  view(seq_.weight, param_grads) += d_seq * cache.seq_cols.transpose();
  view(seq_.bias, param_grads) += d_seq.rowwise().sum();
  if (conv_.empty()) return;

  const Matrix d_cols = view(seq_.weight).transpose() * d_seq;
  const int channels = config_.stages.back().channels;
  const int depth = channels * mels;
  const int k = config_.seq_kernel;
  Matrix dx = Matrix::Zero(channels, static_cast<Eigen::Index>(frames) * mels);
  for (int j = 0; j < k; ++j) {
    for (int t = 0; t < frames; ++t) {
      const int src = t + j - k / 2;
      if (src < 0 || src >= frames) continue;
      for (int c = 0; c < channels; ++c)
        for (int f = 0; f < mels; ++f) dx(c, src * mels + f) += d_cols(j * depth + c * mels + f, t);
    }
  }

  for (int s = static_cast<int>(conv_.size()) - 1; s >= 0; --s) {
    const auto& stage = config_.stages[s];
    const int sf = cache.stage_frames[s];
    const int sm = cache.stage_mels[s];
    Matrix d_pre = avg_pool_backward(dx, sf, sm, stage.time_pool, stage.freq_pool);
    d_pre = d_pre.cwiseProduct((cache.stage_pre[s].array() > 0.0).cast<double>().matrix());
    view(conv_[s].weight, param_grads) += d_pre * cache.stage_cols[s].transpose();
    view(conv_[s].bias, param_grads) += d_pre.rowwise().sum();
    if (s == 0) break;
    const Matrix d_stage_cols = view(conv_[s].weight).transpose() * d_pre;
    dx = col2im3x3(d_stage_cols, static_cast<int>(cache.stage_inputs[s].rows()), sf, sm);
  }
}

namespace {
constexpr char kCheckpointMagic[8] = {'S', 'E', 'L', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;
}  // namespace

// Layout (little-endian): magic "SELDCKPT", u32 version, u32 representation,
// u32 classes, f64 frame_len, f64 hop, u32 window, u32 n_mels, u32 sample_rate,
// u32 stage count, per stage u32 channels/time_pool/freq_pool, u32 seq_hidden,
// u32 seq_kernel, u32 head_hidden, u32 time_pool, f64 mean[7F], f64 std[7F],
// u64 parameter count, f64 parameters[].
void Model::save(std::ostream& out) const {
  using namespace binio;
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  write_u32(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(config_.format.kind()));
  write_u32(out, static_cast<std::uint32_t>(config_.format.num_classes()));
  write_f64(out, config_.features.frame_len);
  write_f64(out, config_.features.hop);
  write_u32(out, static_cast<std::uint32_t>(config_.features.window));
  write_u32(out, static_cast<std::uint32_t>(config_.features.n_mels));
  write_u32(out, static_cast<std::uint32_t>(config_.features.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(config_.stages.size()));
  for (const auto& s : config_.stages) {
    write_u32(out, static_cast<std::uint32_t>(s.channels));
    write_u32(out, static_cast<std::uint32_t>(s.time_pool));
    write_u32(out, static_cast<std::uint32_t>(s.freq_pool));
  }
  write_u32(out, static_cast<std::uint32_t>(config_.seq_hidden));
  write_u32(out, static_cast<std::uint32_t>(config_.seq_kernel));
  write_u32(out, static_cast<std::uint32_t>(config_.head_hidden));
  write_u32(out, static_cast<std::uint32_t>(config_.time_pool));
  for (double v : mean_) write_f64(out, v);
  for (double v : stddev_) write_f64(out, v);
  write_u64(out, params_.size());
  out.write(reinterpret_cast<const char*>(params_.data()),
            static_cast<std::streamsize>(params_.size() * sizeof(double)));
  if (!out) throw IoError("error while writing checkpoint");
}

Model Model::load(std::istream& in) {
  using namespace binio;
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw IoError("not a model checkpoint (bad magic)");
  if (read_u32(in) != kCheckpointVersion) throw IoError("unsupported checkpoint version");
  const auto kind = read_u32(in);
  if (kind > static_cast<std::uint32_t>(ReprKind::kSedDoaSde)) throw IoError("unknown representation");
  const auto classes = read_u32(in);
  if (classes < 1 || classes > 100000) throw IoError("invalid class count");
  ModelConfig cfg;
  cfg.format = ReprFormat(static_cast<ReprKind>(kind), static_cast<int>(classes));
  cfg.features.frame_len = read_f64(in);
  cfg.features.hop = read_f64(in);
  const auto window = read_u32(in);
  if (window > static_cast<std::uint32_t>(WindowKind::kHamming)) throw IoError("unknown window");
  cfg.features.window = static_cast<WindowKind>(window);
  cfg.features.n_mels = static_cast<int>(read_u32(in));
  cfg.features.sample_rate = static_cast<int>(read_u32(in));
  const auto n_stages = read_u32(in);
  if (n_stages > 64) throw IoError("implausible stage count");
  cfg.stages.clear();
  for (std::uint32_t i = 0; i < n_stages; ++i) {
    ConvStage s;
    s.channels = static_cast<int>(read_u32(in));
    s.time_pool = static_cast<int>(read_u32(in));
    s.freq_pool = static_cast<int>(read_u32(in));
    cfg.stages.push_back(s);
  }
  cfg.seq_hidden = static_cast<int>(read_u32(in));
  cfg.seq_kernel = static_cast<int>(read_u32(in));
  cfg.head_hidden = static_cast<int>(read_u32(in));
  cfg.time_pool = static_cast<int>(read_u32(in));
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw IoError(std::string("checkpoint holds an invalid configuration: ") + e.what());
  }
  Model model(cfg, 0);
  std::vector<double> mean(model.mean_.size()), stddev(model.stddev_.size());
  for (double& v : mean) v = read_f64(in);
  for (double& v : stddev) v = read_f64(in);
  model.set_input_normalization(std::move(mean), std::move(stddev));
  if (read_u64(in) != model.params_.size()) throw IoError("checkpoint parameter count mismatch");
  in.read(reinterpret_cast<char*>(model.params_.data()),
          static_cast<std::streamsize>(model.params_.size() * sizeof(double)));
  if (!in) throw IoError("truncated checkpoint");
  return model;
}

void Model::save_file(const std::filesystem::path& path) const {
  std::ostringstream ss(std::ios::binary);
  save(ss);
  write_file_atomic(path, ss.str());
}

Model Model::load_file(const std::filesystem::path& path) {
  std::istringstream ss(read_file(path), std::ios::binary);
  try {
    return load(ss);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

TargetTensor predict_tensor(const Model& model, const AudioClip& audio, double label_hop) {
  const auto features = extract(audio, model.config().features);
  const FrameGrid grid = FrameGrid::from_duration(audio.duration(), label_hop);
  return model.forward(features, grid.frames);
}

Clip predict_clip(const Model& model, const AudioClip& audio, const DecodeConfig& decode_cfg,
                  const ClassMap& classes, double label_hop) {
  if (model.format().num_classes() != classes.size())
    throw ValidationError("model predicts " + std::to_string(model.format().num_classes()) +
                          " classes but the class map has " + std::to_string(classes.size()));
  const auto tensor = predict_tensor(model, audio, label_hop);
  return decode(tensor, decode_cfg, classes, FrameGrid::from_duration(audio.duration(), label_hop));
}

Clip predict_joint(const Model& sed_doa, const Model& sed_sde, const AudioClip& audio,
                   const DecodeConfig& decode_cfg, const ClassMap& classes, double label_hop) {
  if (sed_doa.format().kind() != ReprKind::kSedDoa || sed_sde.format().kind() != ReprKind::kSedSde)
    throw ValidationError("joint prediction needs a sed-doa and a sed-sde checkpoint, in that order");
  const FrameGrid grid = FrameGrid::from_duration(audio.duration(), label_hop);
  const auto a = predict_tensor(sed_doa, audio, label_hop);
  const auto b = predict_tensor(sed_sde, audio, label_hop);
  return combine_joint(a, b, decode_cfg, classes, grid);
}

}  // namespace seld
