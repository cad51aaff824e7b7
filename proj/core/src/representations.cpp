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

#include "seld/representations.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "seld/error.hpp"
#include "seld/file_io.hpp"
#include "seld/tensor_io.hpp"

namespace seld {

ReprFormat::ReprFormat(ReprKind kind, int num_classes) : kind_(kind), num_classes_(num_classes) {
  if (num_classes < 1) throw ValidationError("format needs at least one class");
  using A = Activation;
  using R = BranchRole;
  switch (kind) {
    case ReprKind::kMultiAccdoa:
      roles_ = {R::kAccdoa};
      activations_ = {A::kLinear};
      break;
    case ReprKind::kSedDoa:
      roles_ = {R::kSed, R::kDoa};
      activations_ = {A::kSigmoid, A::kTanh};
      break;
    case ReprKind::kSedSde:
      roles_ = {R::kSed, R::kSde};
      activations_ = {A::kSigmoid, A::kReLU};
      break;
    case ReprKind::kSedSce:
      roles_ = {R::kSed, R::kSce};
      activations_ = {A::kSigmoid, A::kLinear};
      break;
    case ReprKind::kSedDoaSde:
      roles_ = {R::kSed, R::kDoa, R::kSde};
      activations_ = {A::kSigmoid, A::kTanh, A::kReLU};
      break;
    default:
      throw ValidationError("unknown representation kind");
  }
}

int ReprFormat::branch_dim(int q) const {
  switch (role(q)) {
    case BranchRole::kSed:
    case BranchRole::kSde:
      return num_classes_;
    case BranchRole::kDoa:
    case BranchRole::kSce:
      return 3 * num_classes_;
    case BranchRole::kAccdoa:
      return kAccdoaTracks * kAccdoaElements * num_classes_;
  }
  return 0;
}

int ReprFormat::find_branch(BranchRole role) const {
  auto it = std::find(roles_.begin(), roles_.end(), role);
  return it == roles_.end() ? -1 : static_cast<int>(it - roles_.begin());
}

std::string ReprFormat::name() const { return repr_kind_name(kind_); }

namespace {
const std::pair<ReprKind, const char*> kKindNames[] = {
    {ReprKind::kMultiAccdoa, "multi-accdoa"}, {ReprKind::kSedDoa, "sed-doa"},
    {ReprKind::kSedSde, "sed-sde"},           {ReprKind::kSedSce, "sed-sce"},
    {ReprKind::kSedDoaSde, "sed-doa-sde"},
};
}  // namespace

ReprKind parse_repr_kind(std::string_view name) {
  for (const auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  throw ValidationError("unknown representation '" + std::string(name) +
                        "' (expected multi-accdoa, sed-doa, sed-sde, sed-sce or sed-doa-sde)");
}

std::string repr_kind_name(ReprKind kind) {
  for (const auto& [k, n] : kKindNames)
    if (k == kind) return n;
  return "unknown";
}

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
    case Activation::kReLU: return "relu";
    case Activation::kLinear: return "linear";
  }
  return "unknown";
}

TargetTensor::TargetTensor(ReprFormat fmt, int frames) : format(fmt) {
  if (frames < 0) throw ShapeError("frame count must be nonnegative");
  for (int q = 0; q < format.branch_count(); ++q)
    branches.push_back(Matrix::Zero(frames, format.branch_dim(q)));
}

void TargetTensor::check_shape() const {
  if (static_cast<int>(branches.size()) != format.branch_count())
    throw ShapeError(format.name() + " expects " + std::to_string(format.branch_count()) +
                     " branches, got " + std::to_string(branches.size()));
  for (int q = 0; q < format.branch_count(); ++q) {
    if (branches[q].cols() != format.branch_dim(q))
      throw ShapeError(format.name() + " branch " + std::to_string(q) + " expects " +
                       std::to_string(format.branch_dim(q)) + " columns, got " +
                       std::to_string(branches[q].cols()));
    if (branches[q].rows() != branches[0].rows())
      throw ShapeError("branches disagree on frame count");
  }
}

void DecodeConfig::validate() const {
  if (!(sed_threshold >= 0.0 && sed_threshold <= 1.0))
    throw ValidationError("SED threshold must lie in [0, 1]");
  if (!(accdoa_threshold >= 0.0)) throw ValidationError("ACCDOA threshold must be nonnegative");
  if (!(min_distance > 0.0)) throw ValidationError("minimum distance must be positive");
}

namespace {

const Vec3& require_doa(const EventAnnotation& e) {
  if (!e.doa)
    throw ValidationError("event (class " + std::to_string(e.class_id) + ", frame " +
                          std::to_string(e.frame) + ") has no DOA");
  return *e.doa;
}

double require_distance(const EventAnnotation& e) {
  if (!e.distance)
    throw ValidationError("event (class " + std::to_string(e.class_id) + ", frame " +
                          std::to_string(e.frame) + ") has no distance");
  return *e.distance;
}

void put_vector(Matrix& m, int t, int c, int num_classes, const Vec3& v) {
  m(t, vector_column(0, c, num_classes)) = v.x;
  m(t, vector_column(1, c, num_classes)) = v.y;
  m(t, vector_column(2, c, num_classes)) = v.z;
}

Vec3 get_vector(const Matrix& m, int t, int c, int num_classes) {
  return {m(t, vector_column(0, c, num_classes)), m(t, vector_column(1, c, num_classes)),
          m(t, vector_column(2, c, num_classes))};
}

void check_decode_inputs(const TargetTensor& pred, const DecodeConfig& cfg,
                         const ClassMap& classes, const FrameGrid& grid) {
  cfg.validate();
  pred.check_shape();
  if (pred.format.num_classes() != classes.size())
    throw ShapeError("tensor has " + std::to_string(pred.format.num_classes()) +
                     " classes but the class map has " + std::to_string(classes.size()));
  if (pred.frames() != grid.frames)
    throw ShapeError("tensor has " + std::to_string(pred.frames()) +
                     " frames but the grid has " + std::to_string(grid.frames));
}

}  // namespace

TargetTensor encode(const Clip& clip, ReprKind kind) {
  const ReprFormat format(kind, clip.num_classes());
  const int C = clip.num_classes();
  TargetTensor out(format, clip.num_frames());
  std::map<std::pair<int, int>, int> used;
  for (const auto& e : clip.events()) {
    const int track = used[{e.class_id, e.frame}]++;
    if (track >= format.max_tracks())
      throw ValidationError(format.name() + " supports at most " +
                            std::to_string(format.max_tracks()) + " event(s) per class and frame; " +
                            "class " + std::to_string(e.class_id) + " has more in frame " +
                            std::to_string(e.frame));
    const double a = e.activity;
    const int t = e.frame;
    const int c = e.class_id;
    for (int q = 0; q < format.branch_count(); ++q) {
      Matrix& m = out.branches[q];
      switch (format.role(q)) {
        case BranchRole::kSed:
          m(t, c) = a;
          break;
        case BranchRole::kDoa:
          put_vector(m, t, c, C, require_doa(e) * a);
          break;
        case BranchRole::kSde:
          m(t, c) = a * require_distance(e);
          break;
        case BranchRole::kSce:
          put_vector(m, t, c, C, require_doa(e) * (a * require_distance(e)));
          break;
        case BranchRole::kAccdoa: {
          const Vec3 r = require_doa(e) * a;
          m(t, accdoa_column(track, 0, c, C)) = r.x;
          m(t, accdoa_column(track, 1, c, C)) = r.y;
          m(t, accdoa_column(track, 2, c, C)) = r.z;
          m(t, accdoa_column(track, 3, c, C)) = a * require_distance(e);
          break;
        }
      }
    }
  }
  return out;
}

Clip decode(const TargetTensor& pred, const DecodeConfig& cfg, const ClassMap& classes,
            const FrameGrid& grid) {
  check_decode_inputs(pred, cfg, classes, grid);
  const ReprFormat& format = pred.format;
  const int C = format.num_classes();
  std::vector<EventAnnotation> events;

  if (format.kind() == ReprKind::kMultiAccdoa) {
    const Matrix& m = pred.branches[0];
    for (int t = 0; t < pred.frames(); ++t) {
      for (int c = 0; c < C; ++c) {
        for (int track = 0; track < kAccdoaTracks; ++track) {
          const Vec3 v{m(t, accdoa_column(track, 0, c, C)), m(t, accdoa_column(track, 1, c, C)),
                       m(t, accdoa_column(track, 2, c, C))};
          const double n = v.norm();
          if (!(n > cfg.accdoa_threshold) || n == 0.0) continue;
          EventAnnotation e;
          e.frame = t;
          e.class_id = c;
          e.source = track;
          e.doa = v / n;
          e.distance = std::max(m(t, accdoa_column(track, 3, c, C)), cfg.min_distance);
          events.push_back(e);
        }
      }
    }
    return Clip(classes, grid, std::move(events));
  }

  const int sed = format.find_branch(BranchRole::kSed);
  const int doa = format.find_branch(BranchRole::kDoa);
  const int sde = format.find_branch(BranchRole::kSde);
  const int sce = format.find_branch(BranchRole::kSce);
  for (int t = 0; t < pred.frames(); ++t) {
    for (int c = 0; c < C; ++c) {
      const double score = pred.branches[sed](t, c);
      if (!(score > cfg.sed_threshold)) continue;
      EventAnnotation e;
      e.frame = t;
      e.class_id = c;
      if (doa >= 0) {
        const Vec3 v = get_vector(pred.branches[doa], t, c, C);
        const double n = v.norm();
        if (n == 0.0) continue;  // direction undefined
        e.doa = v / n;
      }
      if (sde >= 0) e.distance = std::max(pred.branches[sde](t, c), cfg.min_distance);
      if (sce >= 0) {
        const Vec3 s = get_vector(pred.branches[sce], t, c, C);
        const double n = s.norm();
        if (n < cfg.min_distance) continue;  // direction undefined at the origin
        e.doa = s / n;
        e.distance = n;
      }
      events.push_back(e);
    }
  }
  return Clip(classes, grid, std::move(events));
}

Clip combine_joint(const TargetTensor& sed_doa, const TargetTensor& sed_sde,
                   const DecodeConfig& cfg, const ClassMap& classes, const FrameGrid& grid) {
  if (sed_doa.format.kind() != ReprKind::kSedDoa)
    throw ValidationError("first joint input must be a sed-doa tensor, got " + sed_doa.format.name());
  if (sed_sde.format.kind() != ReprKind::kSedSde)
    throw ValidationError("second joint input must be a sed-sde tensor, got " + sed_sde.format.name());
  check_decode_inputs(sed_doa, cfg, classes, grid);
  check_decode_inputs(sed_sde, cfg, classes, grid);

  const int C = classes.size();
  const Matrix& sed1 = sed_doa.branches[0];
  const Matrix& doa = sed_doa.branches[1];
  const Matrix& sed2 = sed_sde.branches[0];
  const Matrix& sde = sed_sde.branches[1];
  std::vector<EventAnnotation> events;
  for (int t = 0; t < grid.frames; ++t) {
    for (int c = 0; c < C; ++c) {
      const double score = (sed1(t, c) + sed2(t, c)) / 2.0;
      if (!(score > cfg.sed_threshold)) continue;
      const Vec3 v = get_vector(doa, t, c, C);
      const double n = v.norm();
      if (n == 0.0) continue;
      EventAnnotation e;
      e.frame = t;
      e.class_id = c;
      e.doa = v / n;
      e.distance = std::max(sde(t, c), cfg.min_distance);
      events.push_back(e);
    }
  }
  return Clip(classes, grid, std::move(events));
}

namespace {
constexpr char kTargetMagic[8] = {'S', 'E', 'L', 'D', 'T', 'G', 'T', 'S'};
}

void write_target_tensor(std::ostream& out, const TargetTensor& tensor) {
  tensor.check_shape();
  out.write(kTargetMagic, sizeof kTargetMagic);
  binio::write_u32(out, 1);
  binio::write_u32(out, static_cast<std::uint32_t>(tensor.format.kind()));
  binio::write_u32(out, static_cast<std::uint32_t>(tensor.format.num_classes()));
  binio::write_u32(out, static_cast<std::uint32_t>(tensor.branches.size()));
  for (const auto& m : tensor.branches) {
    FlatTensor flat{{static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
                    std::vector<double>(m.data(), m.data() + m.size())};
    write_tensor(out, flat, TensorDtype::kFloat64);
  }
}

TargetTensor read_target_tensor(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kTargetMagic, sizeof magic) != 0)
    throw IoError("not a target tensor file (bad magic)");
  if (binio::read_u32(in) != 1) throw IoError("unsupported target tensor version");
  const auto kind = binio::read_u32(in);
  if (kind > static_cast<std::uint32_t>(ReprKind::kSedDoaSde)) throw IoError("unknown representation kind");
  const auto classes = binio::read_u32(in);
  if (classes < 1 || classes > 100000) throw IoError("invalid class count");
  const ReprFormat format(static_cast<ReprKind>(kind), static_cast<int>(classes));
  const auto count = binio::read_u32(in);
  if (count != static_cast<std::uint32_t>(format.branch_count()))
    throw IoError("branch count does not match representation");
  std::vector<Matrix> branches;
  for (std::uint32_t q = 0; q < count; ++q) {
    const FlatTensor flat = read_tensor(in);
    if (flat.dims.size() != 2) throw IoError("branch block must be two-dimensional");
    Matrix m(static_cast<Eigen::Index>(flat.dims[0]), static_cast<Eigen::Index>(flat.dims[1]));
    std::copy(flat.data.begin(), flat.data.end(), m.data());
    branches.push_back(std::move(m));
  }
  TargetTensor out(format, branches.empty() ? 0 : static_cast<int>(branches[0].rows()));
  out.branches = std::move(branches);
  out.check_shape();
  return out;
}

void write_target_tensor_file(const std::filesystem::path& path, const TargetTensor& tensor) {
  std::ostringstream ss(std::ios::binary);
  write_target_tensor(ss, tensor);
  write_file_atomic(path, ss.str());
}

TargetTensor read_target_tensor_file(const std::filesystem::path& path) {
  std::istringstream ss(read_file(path), std::ios::binary);
  try {
    return read_target_tensor(ss);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace seld
