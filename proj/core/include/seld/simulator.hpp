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

#ifndef SELD_SIMULATOR_HPP_
#define SELD_SIMULATOR_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seld/audio.hpp"
#include "seld/types.hpp"

namespace seld {

enum class SourceKind { kNoiseBurst, kToneComplex };

SourceKind parse_source_kind(std::string_view name);  // "noise", "tone"

// Synthetic anechoic scene description. Events start and end on label-frame
// boundaries so that frame labels are exact.
struct SceneSpec {
  std::uint64_t seed = 0;
  double duration = 10.0;  // seconds
  int n_events = 8;
  ClassMap classes = ClassMap::with_count(3);
  double d_min = 1.0;  // meters
  double d_max = 4.0;
  int polyphony_max = 2;
  SourceKind source_kind = SourceKind::kNoiseBurst;

  int sample_rate = kDefaultSampleRate;
  double label_hop = 0.1;
  double min_event_duration = 0.5;  // seconds
  double max_event_duration = 2.0;
  double max_elevation_deg = 45.0;
  double source_rms = 0.1;  // at the 1 m reference distance
  bool moving_sources = false;
  // Permits up to three simultaneous events of one class (multi-track data).
  bool allow_same_class_overlap = false;

  void validate() const;
  FrameGrid grid() const { return FrameGrid::from_duration(duration, label_hop); }
};

// A placed event: frames [start_frame, end_frame), direction moving linearly
// from doa_start to doa_end (equal for static sources).
struct PlacedEvent {
  int class_id = 0;
  int start_frame = 0;
  int end_frame = 0;
  Vec3 doa_start;
  Vec3 doa_end;
  double distance = 1.0;
};

struct RenderedScene {
  AudioClip audio;
  Clip labels;
  std::vector<PlacedEvent> events;
};

// Frequency band [lo, hi] in Hz that identifies a class's noise bursts: the
// 200 Hz - 8 kHz range split into equal log-frequency bands.
std::pair<double, double> class_band(int class_id, int num_classes);

// Distance gain relative to the 1 m reference: 1 / d.
inline double distance_gain(double distance) { return 1.0 / distance; }

// Random placement drawn from spec.seed, then rendered.
RenderedScene render(const SceneSpec& spec);

// Renders the given events with SN3D first-order encoding:
//   W += g s, Y += g s y, Z += g s z, X += g s x, g = 1 / d.
// Source signals are drawn from spec.seed.
RenderedScene render_events(const SceneSpec& spec, const std::vector<PlacedEvent>& events);

// Scene description for clip `index` of a dataset: the template with a derived seed.
SceneSpec clip_spec(const SceneSpec& tmpl, int index);

struct ManifestEntry {
  std::string audio;   // path relative to the manifest directory
  std::string labels;  // path relative to the manifest directory
  double duration = 0.0;
};

struct Manifest {
  std::vector<std::string> class_names;
  double label_hop = 0.1;
  std::vector<ManifestEntry> entries;

  ClassMap classes() const { return ClassMap(class_names); }
};

constexpr const char* kManifestName = "manifest.csv";

std::string write_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view text);
Manifest read_manifest(const std::filesystem::path& path);

// Renders n_clips scenes into out_dir as clip_NNNN.wav/.csv plus
// manifest.csv. Scenes are independent, so `workers` threads may render them
// concurrently; the output does not depend on the worker count.
Manifest render_dataset(const SceneSpec& tmpl, int n_clips, const std::filesystem::path& out_dir,
                        int workers = 1);

}  // namespace seld

#endif  // SELD_SIMULATOR_HPP_
