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

#ifndef SELD_MODEL_HPP_
#define SELD_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "seld/features.hpp"
#include "seld/representations.hpp"

namespace seld {

struct ConvStage {
  int channels = 16;
  int time_pool = 1;
  int freq_pool = 2;

  bool operator==(const ConvStage&) const = default;
};

// Network shape. The trunk is a stack of 3x3 convolution + ReLU + average
// pooling stages, a temporal convolution + ReLU sequence layer, and average
// pooling in time down to the label rate. Each output branch is two
// fully-connected layers: ReLU hidden layer, then the branch activation.
struct ModelConfig {
  ReprFormat format{ReprKind::kSedDoa, 3};
  StftConfig features;
  std::vector<ConvStage> stages{{16, 1, 4}, {32, 1, 4}, {64, 1, 2}};
  int seq_hidden = 128;
  int seq_kernel = 3;
  int head_hidden = 128;
  int time_pool = 5;

  void validate() const;
  // Frames and mel bins left after the convolution stages.
  int trunk_mels() const;
  int trunk_frames(int input_frames) const;
  // Label frames produced for an input of `input_frames` STFT frames.
  int output_frames(int input_frames) const;

  bool operator==(const ModelConfig&) const = default;
};

// Intermediate values kept by forward() for backward().
struct ForwardCache {
  bool valid = false;
  int input_frames = 0;
  int out_frames = 0;
  std::vector<Matrix> stage_inputs;   // channels x (T*F), post-normalization input first
  std::vector<Matrix> stage_cols;     // im2col of each stage input
  std::vector<Matrix> stage_pre;      // conv outputs before ReLU
  std::vector<int> stage_frames;      // T at each stage input
  std::vector<int> stage_mels;        // F at each stage input
  Matrix seq_cols;                    // (k*D) x T_L
  Matrix seq_pre;                     // seq_hidden x T_L
  Matrix pooled;                      // T_out x seq_hidden
  std::vector<Matrix> head_pre1;      // T_out x head_hidden
  std::vector<Matrix> head_act1;      // T_out x head_hidden
  std::vector<Matrix> head_pre2;      // T_out x N_q
  std::vector<Matrix> head_out;       // T_out x N_q
};

class Model {
 public:
  // Hidden layers use uniform fan-in initialization from `seed`; the last
  // layer of every branch starts at zero.
  Model(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  const ReprFormat& format() const { return config_.format; }

  std::size_t parameter_count() const { return params_.size(); }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Per (feature channel, mel bin) standardization applied to inputs.
  void set_input_normalization(std::vector<double> mean, std::vector<double> stddev);
  const std::vector<double>& input_mean() const { return mean_; }
  const std::vector<double>& input_stddev() const { return stddev_; }

  // out_frames < 0 selects config().output_frames(features.frames()); other
  // values truncate or extend (repeating the last window) the pooled sequence.
  TargetTensor forward(const SpectralFeatures& features, int out_frames = -1) const;
  TargetTensor forward(const SpectralFeatures& features, ForwardCache& cache, int out_frames = -1) const;

  // Accumulates d loss / d parameters into `param_grads` given d loss / d
  // branch output. Requires a cache filled by forward().
  void backward(const ForwardCache& cache, const std::vector<Matrix>& output_grads,
                std::span<double> param_grads) const;

  void save(std::ostream& out) const;
  static Model load(std::istream& in);
  void save_file(const std::filesystem::path& path) const;
  static Model load_file(const std::filesystem::path& path);

 private:
  struct Block {
    std::size_t offset = 0;
    int rows = 0;
    int cols = 0;
  };
  struct Dense {
    Block weight, bias;
  };

  Block allocate(int rows, int cols);
  Eigen::Map<const Matrix> view(const Block& b) const;
  Eigen::Map<Matrix> view(const Block& b, std::span<double> storage) const;

  ModelConfig config_;
  std::vector<Dense> conv_;
  Dense seq_;
  std::vector<Dense> head1_, head2_;
  std::vector<double> params_;
  std::vector<double> mean_, stddev_;
};

// Label-rate output for one clip: extract features, run the network, and
// size the output to the clip's label grid.
TargetTensor predict_tensor(const Model& model, const AudioClip& audio, double label_hop = 0.1);
Clip predict_clip(const Model& model, const AudioClip& audio, const DecodeConfig& decode_cfg,
                  const ClassMap& classes, double label_hop = 0.1);
// Joint prediction with a SED-DOA and a SED-SDE model.
Clip predict_joint(const Model& sed_doa, const Model& sed_sde, const AudioClip& audio,
                   const DecodeConfig& decode_cfg, const ClassMap& classes, double label_hop = 0.1);

}  // namespace seld

#endif  // SELD_MODEL_HPP_
