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

#ifndef SELD_REPRESENTATIONS_HPP_
#define SELD_REPRESENTATIONS_HPP_

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "seld/types.hpp"

namespace seld {

// T x N matrix, one row per label frame.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ReprKind { kMultiAccdoa = 0, kSedDoa = 1, kSedSde = 2, kSedSce = 3, kSedDoaSde = 4 };
enum class Activation { kSigmoid, kTanh, kReLU, kLinear };
// What a branch predicts; drives the per-branch loss.
enum class BranchRole { kSed, kDoa, kSde, kSce, kAccdoa };

// Number of tracks in the multi-ACCDOA output and elements per track entry
// (x, y, z, distance).
constexpr int kAccdoaTracks = 3;
constexpr int kAccdoaElements = 4;

// Output layout for one representation and class count:
//   MultiAccdoa  Q=1  [3*4C]        [Linear]
//   SedDoa       Q=2  [C, 3C]       [Sigmoid, Tanh]
//   SedSde       Q=2  [C, C]        [Sigmoid, ReLU]
//   SedSce       Q=2  [C, 3C]       [Sigmoid, Linear]
//   SedDoaSde    Q=3  [C, 3C, C]    [Sigmoid, Tanh, ReLU]
// Vector-valued branches store component-major columns: column comp*C + c.
// Multi-ACCDOA column (track*4 + element)*C + c.
class ReprFormat {
 public:
  ReprFormat(ReprKind kind, int num_classes);

  ReprKind kind() const { return kind_; }
  int num_classes() const { return num_classes_; }
  int branch_count() const { return static_cast<int>(roles_.size()); }
  int branch_dim(int q) const;
  Activation activation(int q) const { return activations_.at(q); }
  BranchRole role(int q) const { return roles_.at(q); }
  // Index of the first branch with the role, or -1.
  int find_branch(BranchRole role) const;
  // Maximum same-class events per frame the format can carry.
  int max_tracks() const { return kind_ == ReprKind::kMultiAccdoa ? kAccdoaTracks : 1; }
  bool is_single_track() const { return max_tracks() == 1; }

  std::string name() const;

  bool operator==(const ReprFormat&) const = default;

 private:
  ReprKind kind_;
  int num_classes_;
  std::vector<BranchRole> roles_;
  std::vector<Activation> activations_;
};

// Accepts "multi-accdoa", "sed-doa", "sed-sde", "sed-sce", "sed-doa-sde".
ReprKind parse_repr_kind(std::string_view name);
std::string repr_kind_name(ReprKind kind);
std::string_view activation_name(Activation a);

inline int vector_column(int component, int class_id, int num_classes) {
  return component * num_classes + class_id;
}
inline int accdoa_column(int track, int element, int class_id, int num_classes) {
  return (track * kAccdoaElements + element) * num_classes + class_id;
}

// Per-branch network outputs or learning targets.
struct TargetTensor {
  TargetTensor(ReprFormat format, int frames);  // zero-filled

  ReprFormat format;
  std::vector<Matrix> branches;

  int frames() const { return static_cast<int>(branches.front().rows()); }
  // Throws ShapeError unless branch count and dims match the format.
  void check_shape() const;
};

struct DecodeConfig {
  double sed_threshold = 0.5;
  double accdoa_threshold = 0.5;
  double min_distance = 0.01;  // meters

  void validate() const;
};

// Builds the learning target. Events are taken in clip order; for
// multi-ACCDOA the n-th event of a (class, frame) cell goes to track n.
TargetTensor encode(const Clip& clip, ReprKind kind);

// Thresholds network outputs into events on the given grid.
Clip decode(const TargetTensor& pred, const DecodeConfig& cfg, const ClassMap& classes,
            const FrameGrid& grid);

// Joint prediction from separately trained SED-DOA and SED-SDE models: the
// activity score is the mean of both SED outputs, the DOA comes from the
// first model and the distance from the second.
Clip combine_joint(const TargetTensor& sed_doa, const TargetTensor& sed_sde,
                   const DecodeConfig& cfg, const ClassMap& classes, const FrameGrid& grid);

// Container layout (little-endian):
//   char[8] "SELDTGTS", u32 version (1), u32 kind, u32 num_classes,
//   u32 branch count, then one tensor block (see tensor_io.hpp) per branch
//   with shape T x N_q stored as float64.
void write_target_tensor(std::ostream& out, const TargetTensor& tensor);
TargetTensor read_target_tensor(std::istream& in);
void write_target_tensor_file(const std::filesystem::path& path, const TargetTensor& tensor);
TargetTensor read_target_tensor_file(const std::filesystem::path& path);

}  // namespace seld

#endif  // SELD_REPRESENTATIONS_HPP_
