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

#include "seld/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "fft.hpp"
#include "seld/error.hpp"
#include "seld/file_io.hpp"
#include "seld/label_io.hpp"
#include "seld/parallel.hpp"
#include "seld/rng.hpp"

namespace seld {

namespace {
constexpr double kBandLowHz = 200.0;
constexpr double kBandHighHz = 8000.0;
constexpr double kEdgeSeconds = 0.010;
}  // namespace

SourceKind parse_source_kind(std::string_view name) {
  if (name == "noise") return SourceKind::kNoiseBurst;
  if (name == "tone") return SourceKind::kToneComplex;
  throw ValidationError("unknown source kind '" + std::string(name) + "' (expected noise or tone)");
}

void SceneSpec::validate() const {
  if (!(duration > 0.0)) throw ValidationError("scene duration must be positive");
  if (n_events < 0) throw ValidationError("event count must be nonnegative");
  if (!(d_min > 0.0)) throw ValidationError("minimum distance must be positive");
  if (!(d_max >= d_min)) throw ValidationError("maximum distance must be >= minimum distance");
  if (polyphony_max < 1 || polyphony_max > kMaxTracks)
    throw ValidationError("polyphony must lie in [1, 3]");
  if (sample_rate <= 2 * kBandHighHz) throw ValidationError("sample rate must exceed 16 kHz");
  if (!(label_hop > 0.0)) throw ValidationError("label hop must be positive");
  if (!(min_event_duration >= label_hop && max_event_duration >= min_event_duration))
    throw ValidationError("event durations must satisfy hop <= min <= max");
  if (n_events > 0 && min_event_duration > duration + 1e-9)
    throw ValidationError("events do not fit inside the scene duration");
  if (!(max_elevation_deg >= 0.0 && max_elevation_deg <= 90.0))
    throw ValidationError("maximum elevation must lie in [0, 90] degrees");
  if (!(source_rms > 0.0)) throw ValidationError("source level must be positive");
}

std::pair<double, double> class_band(int class_id, int num_classes) {
  const double ratio = kBandHighHz / kBandLowHz;
  const double lo = kBandLowHz * std::pow(ratio, static_cast<double>(class_id) / num_classes);
  const double hi = kBandLowHz * std::pow(ratio, static_cast<double>(class_id + 1) / num_classes);
  return {lo, hi};
}

namespace {

std::size_t frame_to_sample(int frame, const SceneSpec& spec) {
  return static_cast<std::size_t>(std::llround(frame * spec.label_hop * spec.sample_rate));
}

void normalize_rms(std::vector<double>& s, double target) {
  double energy = 0.0;
  for (double v : s) energy += v * v;
  if (energy == 0.0) return;
  const double scale = target / std::sqrt(energy / static_cast<double>(s.size()));
  for (double& v : s) v *= scale;
}

std::vector<double> noise_burst(std::size_t length, int class_id, const SceneSpec& spec, Rng& rng) {
  int n = 1;
  while (static_cast<std::size_t>(n) < length) n *= 2;
  const auto [lo, hi] = class_band(class_id, spec.classes.size());
  std::vector<std::complex<double>> bins(n / 2 + 1);
  const double bin_hz = static_cast<double>(spec.sample_rate) / n;
  for (int k = 0; k <= n / 2; ++k) {
    const double f = k * bin_hz;
    if (f >= lo && f <= hi) bins[k] = {rng.normal(), rng.normal()};
  }
  std::vector<double> full(n);
  internal::RealFft::for_size(n).inverse(bins.data(), full.data());
  return std::vector<double>(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(length));
}

std::vector<double> tone_complex(std::size_t length, int class_id, const SceneSpec& spec, Rng& rng) {
  const int C = spec.classes.size();
  const double f0 = 150.0 * std::pow(4.0, C > 1 ? static_cast<double>(class_id) / (C - 1) : 0.0);
  std::vector<double> s(length, 0.0);
  for (int h = 1; h * f0 <= kBandHighHz; ++h) {
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    const double w = 2.0 * kPi * h * f0 / spec.sample_rate;
    for (std::size_t i = 0; i < length; ++i) s[i] += std::sin(w * static_cast<double>(i) + phase) / h;
  }
  return s;
}

std::vector<double> source_signal(std::size_t length, int class_id, const SceneSpec& spec, Rng& rng) {
  auto s = spec.source_kind == SourceKind::kNoiseBurst ? noise_burst(length, class_id, spec, rng)
                                                       : tone_complex(length, class_id, spec, rng);
  const std::size_t edge = std::min<std::size_t>(
      static_cast<std::size_t>(kEdgeSeconds * spec.sample_rate), length / 2);
  for (std::size_t i = 0; i < edge; ++i) {
    const double g = 0.5 - 0.5 * std::cos(kPi * (static_cast<double>(i) + 0.5) / edge);
    s[i] *= g;
    s[length - 1 - i] *= g;
  }
  normalize_rms(s, spec.source_rms);
  return s;
}

Vec3 interpolate_direction(const Vec3& a, const Vec3& b, double frac) {
  const Vec3 v = a * (1.0 - frac) + b * frac;
  const double n = v.norm();
  return n > 0.0 ? v / n : a;
}

Vec3 random_direction(Rng& rng, double max_elevation_deg) {
  const double az = rng.uniform(-kPi, kPi);
  const double s = std::sin(deg_to_rad(max_elevation_deg));
  const double el = std::asin(rng.uniform(-s, s));
  return Vec3::from_spherical(az, el);
}

std::vector<PlacedEvent> place_events(const SceneSpec& spec, Rng& rng) {
  const int T = spec.grid().frames;
  const int C = spec.classes.size();
  const int min_len = std::max(1, static_cast<int>(std::ceil(spec.min_event_duration / spec.label_hop - 1e-9)));
  const int max_len = std::min(T, static_cast<int>(std::floor(spec.max_event_duration / spec.label_hop + 1e-9)));
  if (spec.n_events > 0 && min_len > T) throw ValidationError("events do not fit inside the scene");
  const int per_class_limit = spec.allow_same_class_overlap ? kMaxTracks : 1;

  std::vector<int> total(T, 0);
  std::vector<std::vector<int>> per_class(C, std::vector<int>(T, 0));
  std::vector<PlacedEvent> events;
  for (int i = 0; i < spec.n_events; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      const int c = rng.uniform_int(0, C - 1);
      const int len = rng.uniform_int(min_len, std::max(min_len, max_len));
      const int start = rng.uniform_int(0, T - len);
      bool fits = true;
      for (int f = start; f < start + len && fits; ++f)
        fits = total[f] < spec.polyphony_max && per_class[c][f] < per_class_limit;
      if (!fits) continue;
      for (int f = start; f < start + len; ++f) {
        ++total[f];
        ++per_class[c][f];
      }
      PlacedEvent e;
      e.class_id = c;
      e.start_frame = start;
      e.end_frame = start + len;
      e.doa_start = random_direction(rng, spec.max_elevation_deg);
      e.doa_end = e.doa_start;
      if (spec.moving_sources) {
        const double az = e.doa_start.azimuth() + deg_to_rad(rng.uniform(-30.0, 30.0));
        const double el = std::clamp(e.doa_start.elevation() + deg_to_rad(rng.uniform(-10.0, 10.0)),
                                     -deg_to_rad(spec.max_elevation_deg), deg_to_rad(spec.max_elevation_deg));
        e.doa_end = Vec3::from_spherical(az, el);
      }
      e.distance = rng.uniform(spec.d_min, spec.d_max);
      events.push_back(e);
      placed = true;
    }
    if (!placed)
      throw ValidationError("could not place " + std::to_string(spec.n_events) +
                            " events under the polyphony limit; reduce the event count or durations");
  }
  return events;
}

}  // namespace

RenderedScene render_events(const SceneSpec& spec, const std::vector<PlacedEvent>& events) {
  spec.validate();
  const FrameGrid grid = spec.grid();
  const auto num_samples = static_cast<std::size_t>(std::llround(spec.duration * spec.sample_rate));
  AudioClip audio(spec.sample_rate, num_samples);
  std::vector<EventAnnotation> labels;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const PlacedEvent& e = events[i];
    if (e.class_id < 0 || e.class_id >= spec.classes.size())
      throw RangeError("event class " + std::to_string(e.class_id) + " out of range");
    if (e.start_frame < 0 || e.end_frame > grid.frames || e.start_frame >= e.end_frame)
      throw RangeError("event frames [" + std::to_string(e.start_frame) + ", " +
                       std::to_string(e.end_frame) + ") outside the scene");
    if (!(e.distance > 0.0)) throw ValidationError("event distance must be positive");
    const std::size_t s0 = frame_to_sample(e.start_frame, spec);
    const std::size_t s1 = std::min(frame_to_sample(e.end_frame, spec), num_samples);
    if (s1 <= s0) continue;
    const std::size_t length = s1 - s0;

    Rng rng(mix_seed(spec.seed, 1000 + i));
    const auto s = source_signal(length, e.class_id, spec, rng);
    const double g = distance_gain(e.distance);
    const Vec3 a = e.doa_start / e.doa_start.norm();
    const Vec3 b = e.doa_end / e.doa_end.norm();
    const bool moving = !(a == b);
    auto w = audio.channel(kW);
    auto x = audio.channel(kX);
    auto y = audio.channel(kY);
    auto z = audio.channel(kZ);
    for (std::size_t k = 0; k < length; ++k) {
      const Vec3 dir = moving ? interpolate_direction(a, b, (static_cast<double>(k) + 0.5) / length) : a;
      const double v = g * s[k];
      w[s0 + k] += v;
      x[s0 + k] += v * dir.x;
      y[s0 + k] += v * dir.y;
      z[s0 + k] += v * dir.z;
    }
    for (int f = e.start_frame; f < e.end_frame; ++f) {
      EventAnnotation ann;
      ann.frame = f;
      ann.class_id = e.class_id;
      ann.source = static_cast<int>(i);
      ann.activity = 1.0;
      const double frac = (f + 0.5 - e.start_frame) / (e.end_frame - e.start_frame);
      ann.doa = moving ? interpolate_direction(a, b, frac) : a;
      ann.distance = e.distance;
      labels.push_back(ann);
    }
  }
  Clip clip(spec.classes, grid, std::move(labels));
  return {std::move(audio), clip.sorted(), events};
}

RenderedScene render(const SceneSpec& spec) {
  spec.validate();
  Rng rng(mix_seed(spec.seed, 0));
  return render_events(spec, place_events(spec, rng));
}

SceneSpec clip_spec(const SceneSpec& tmpl, int index) {
  SceneSpec spec = tmpl;
  spec.seed = mix_seed(tmpl.seed, static_cast<std::uint64_t>(index) + 1);
  return spec;
}

std::string write_manifest(const Manifest& m) {
  std::ostringstream out;
  out << "# seld-manifest 1\n# classes=";
  for (std::size_t i = 0; i < m.class_names.size(); ++i) out << (i ? ";" : "") << m.class_names[i];
  out << "\n# label_hop=" << format_decimal(m.label_hop, 9) << "\n";
  out << "audio,labels,duration_s\n";
  for (const auto& e : m.entries)
    out << e.audio << ',' << e.labels << ',' << format_decimal(e.duration, 6) << '\n';
  return out.str();
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "audio,labels,duration_s") continue;
    if (line[0] == '#') {
      if (line.rfind("# classes=", 0) == 0) {
        std::string rest = line.substr(10);
        std::size_t pos = 0;
        while (true) {
          const auto semi = rest.find(';', pos);
          m.class_names.push_back(rest.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
          if (semi == std::string::npos) break;
          pos = semi + 1;
        }
      } else if (line.rfind("# label_hop=", 0) == 0) {
        try {
          m.label_hop = std::stod(line.substr(12));
        } catch (const std::exception&) {
          throw ParseError("invalid label_hop", line_no);
        }
      }
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("expected audio,labels,duration_s", line_no);
    ManifestEntry e;
    e.audio = line.substr(0, c1);
    e.labels = line.substr(c1 + 1, c2 - c1 - 1);
    try {
      e.duration = std::stod(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw ParseError("invalid duration", line_no);
    }
    m.entries.push_back(e);
  }
  if (m.class_names.empty()) throw ParseError("manifest lists no classes", 1);
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

Manifest render_dataset(const SceneSpec& tmpl, int n_clips, const std::filesystem::path& out_dir,
                        int workers) {
  tmpl.validate();
  if (n_clips < 0) throw ValidationError("clip count must be nonnegative");
  Manifest manifest;
  manifest.class_names = tmpl.classes.names();
  manifest.label_hop = tmpl.label_hop;
  manifest.entries.resize(n_clips);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  parallel_for(static_cast<std::size_t>(n_clips), workers, [&](std::size_t i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "clip_%04zu", i);
    const auto scene = render(clip_spec(tmpl, static_cast<int>(i)));
    ManifestEntry entry{std::string(stem) + ".wav", std::string(stem) + ".csv", tmpl.duration};
    write_wav(out_dir / entry.audio, scene.audio);
    write_label_file(out_dir / entry.labels, scene.labels);
    manifest.entries[i] = entry;
  });
  write_file_atomic(out_dir / kManifestName, write_manifest(manifest));
  return manifest;
}

}  // namespace seld
