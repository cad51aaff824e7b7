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

#include "seld/types.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "seld/error.hpp"

namespace seld {

Vec3 Vec3::from_spherical(double azimuth_rad, double elevation_rad) {
  const double ce = std::cos(elevation_rad);
  return {std::cos(azimuth_rad) * ce, std::sin(azimuth_rad) * ce,
          std::sin(elevation_rad)};
}

double Vec3::elevation() const {
  const double n = norm();
  if (n == 0.0) return 0.0;
  return std::asin(std::clamp(z / n, -1.0, 1.0));
}

double angular_distance_deg(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 180.0;
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return rad_to_deg(std::acos(c));
}

ClassMap::ClassMap(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ValidationError("class map must contain at least one class");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("class name must not be empty");
    if (!seen.insert(n).second) throw ValidationError("duplicate class name '" + n + "'");
  }
}

ClassMap ClassMap::with_count(int count) {
  if (count < 1) throw ValidationError("class count must be >= 1");
  std::vector<std::string> names;
  names.reserve(count);
  for (int i = 0; i < count; ++i) names.push_back("class" + std::to_string(i));
  return ClassMap(std::move(names));
}

const std::string& ClassMap::name(int index) const {
  if (index < 0 || index >= size())
    throw RangeError("class index " + std::to_string(index) + " out of range");
  return names_[index];
}

std::optional<int> ClassMap::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

FrameGrid FrameGrid::from_duration(double clip_duration, double label_hop) {
  if (!(label_hop > 0.0)) throw ValidationError("label hop must be positive");
  if (!(clip_duration >= 0.0)) throw ValidationError("clip duration must be nonnegative");
  // 1e-9 slack so that e.g. 10.0 / 0.1 does not round up to 101 frames.
  const int frames = static_cast<int>(std::ceil(clip_duration / label_hop - 1e-9));
  return {label_hop, std::max(frames, 0), clip_duration};
}

FrameGrid FrameGrid::from_frames(int frames, double label_hop) {
  if (!(label_hop > 0.0)) throw ValidationError("label hop must be positive");
  if (frames < 0) throw ValidationError("frame count must be nonnegative");
  return {label_hop, frames, frames * label_hop};
}

void validate_annotation(const EventAnnotation& e, int num_classes, int num_frames) {
  if (e.class_id < 0 || e.class_id >= num_classes)
    throw RangeError("class index " + std::to_string(e.class_id) + " outside [0, " +
                     std::to_string(num_classes) + ")");
  if (e.frame < 0 || e.frame >= num_frames)
    throw RangeError("frame " + std::to_string(e.frame) + " outside [0, " +
                     std::to_string(num_frames) + ")");
  if (!(e.activity >= 0.0 && e.activity <= 1.0))
    throw ValidationError("activity must lie in [0, 1]");
  if (e.distance && !(*e.distance > 0.0 && std::isfinite(*e.distance)))
    throw ValidationError("distance must be positive and finite");
  if (e.doa) {
    const double n = e.doa->norm();
    if (!std::isfinite(n)) throw ValidationError("DOA must be finite");
    if (e.activity == 1.0 && std::abs(n - 1.0) > 1e-6)
      throw ValidationError("active DOA must be unit length (norm " + std::to_string(n) + ")");
  }
}

Clip::Clip(ClassMap classes, FrameGrid grid, std::vector<EventAnnotation> events)
    : classes_(std::move(classes)), grid_(grid), events_(std::move(events)) {
  std::map<std::pair<int, int>, int> per_cell;
  for (const auto& e : events_) {
    validate_annotation(e, classes_.size(), grid_.frames);
    if (++per_cell[{e.class_id, e.frame}] > kMaxTracks)
      throw ValidationError("more than " + std::to_string(kMaxTracks) +
                            " events for class " + std::to_string(e.class_id) +
                            " in frame " + std::to_string(e.frame));
  }
}

int Clip::max_polyphony_per_class() const {
  std::map<std::pair<int, int>, int> per_cell;
  int best = 0;
  for (const auto& e : events_) best = std::max(best, ++per_cell[{e.class_id, e.frame}]);
  return best;
}

Clip Clip::sorted() const {
  auto events = events_;
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frame, a.class_id, a.source) < std::tie(b.frame, b.class_id, b.source);
  });
  return Clip(classes_, grid_, std::move(events));
}

}  // namespace seld
