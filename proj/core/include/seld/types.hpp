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

#ifndef SELD_TYPES_HPP_
#define SELD_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seld {

// Dimensionless Cartesian triple used for DOA vectors and source positions.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  bool operator==(const Vec3&) const = default;

  // Azimuth counterclockwise from +x, elevation up-positive, both radians.
  static Vec3 from_spherical(double azimuth_rad, double elevation_rad);
  double azimuth() const { return std::atan2(y, x); }
  double elevation() const;
};

// Angle between two directions in degrees. Inputs need not be unit length.
double angular_distance_deg(const Vec3& a, const Vec3& b);

constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Ordered set of sound event class names.
class ClassMap {
 public:
  explicit ClassMap(std::vector<std::string> names);
  // Names "class0" .. "class{count-1}".
  static ClassMap with_count(int count);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const;
  std::optional<int> index_of(std::string_view name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const ClassMap&) const = default;

 private:
  std::vector<std::string> names_;
};

// Label-rate time axis for one clip.
struct FrameGrid {
  double label_hop = 0.1;
  int frames = 0;
  double clip_duration = 0.0;

  // frames = ceil(duration / hop), tolerant of floating-point noise.
  static FrameGrid from_duration(double clip_duration, double label_hop = 0.1);
  static FrameGrid from_frames(int frames, double label_hop = 0.1);

  bool operator==(const FrameGrid& o) const {
    return frames == o.frames && std::abs(label_hop - o.label_hop) < 1e-12;
  }
};

// One class active in one label frame. Ground truth and decoded predictions
// carry activity 1; predictions may omit the field their model does not
// estimate (a SED-SDE model has no DOA).
struct EventAnnotation {
  int frame = 0;
  int class_id = 0;
  int source = 0;
  double activity = 1.0;
  std::optional<Vec3> doa;
  std::optional<double> distance;

  bool operator==(const EventAnnotation&) const = default;
};

// Maximum simultaneous same-class events (multi-track formats).
constexpr int kMaxTracks = 3;

class Clip {
 public:
  Clip(ClassMap classes, FrameGrid grid, std::vector<EventAnnotation> events = {});

  const ClassMap& classes() const { return classes_; }
  const FrameGrid& grid() const { return grid_; }
  const std::vector<EventAnnotation>& events() const { return events_; }
  int num_classes() const { return classes_.size(); }
  int num_frames() const { return grid_.frames; }

  // Largest number of events sharing one (class, frame) cell.
  int max_polyphony_per_class() const;
  // Events sorted by (frame, class, source); original order kept for ties.
  Clip sorted() const;

 private:
  ClassMap classes_;
  FrameGrid grid_;
  std::vector<EventAnnotation> events_;
};

// Throws ValidationError/RangeError when `e` breaks the annotation invariants
// for the given class count and frame count.
void validate_annotation(const EventAnnotation& e, int num_classes, int num_frames);

}  // namespace seld

#endif  // SELD_TYPES_HPP_
