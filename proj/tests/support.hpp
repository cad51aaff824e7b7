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

#ifndef SELD_TESTS_SUPPORT_HPP_
#define SELD_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include "seld/representations.hpp"
#include "seld/rng.hpp"
#include "seld/simulator.hpp"
#include "seld/types.hpp"

namespace seld::testing {

inline Vec3 random_unit(Rng& rng) {
  for (;;) {
    Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    const double n = v.norm();
    if (n > 1e-3) return v / n;
  }
}

inline Matrix random_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

inline Matrix random_activity(Rng& rng, int rows, int cols, double p = 0.5) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform() < p ? 1.0 : 0.0;
  return m;
}

// Random ground-truth clip with up to `max_poly` events per (class, frame).
inline Clip random_clip(Rng& rng, int classes, int frames, int max_poly, double density = 0.4,
                        bool with_doa = true, bool with_distance = true) {
  std::vector<EventAnnotation> events;
  for (int t = 0; t < frames; ++t) {
    for (int c = 0; c < classes; ++c) {
      if (rng.uniform() >= density) continue;
      const int n = rng.uniform_int(1, max_poly);
      for (int s = 0; s < n; ++s) {
        EventAnnotation e;
        e.frame = t;
        e.class_id = c;
        e.source = s;
        if (with_doa) e.doa = random_unit(rng);
        if (with_distance) e.distance = rng.uniform(0.3, 6.0);
        events.push_back(e);
      }
    }
  }
  return Clip(ClassMap::with_count(classes), FrameGrid::from_frames(frames), events);
}

// O(N^2) DFT of a real sequence, bins 0..N/2.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    twiddle[i] = {std::cos(phase), std::sin(phase)};
  }
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * twiddle[(k * i) % n];
    out[k] = acc;
  }
  return out;
}

// Central finite difference of f with respect to every entry of `x`.
inline Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, Matrix x, double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = x.data()[i];
    x.data()[i] = saved + h;
    const double up = f(x);
    x.data()[i] = saved - h;
    const double down = f(x);
    x.data()[i] = saved;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("seld_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// One static source for the whole clip.
inline RenderedScene render_single_source(std::uint64_t seed, const Vec3& doa, double distance,
                                          double duration = 1.0, int class_id = 0) {
  SceneSpec spec;
  spec.seed = seed;
  spec.duration = duration;
  spec.n_events = 1;
  const int frames = spec.grid().frames;
  PlacedEvent ev;
  ev.class_id = class_id;
  ev.start_frame = 0;
  ev.end_frame = frames;
  ev.doa_start = ev.doa_end = doa;
  ev.distance = distance;
  return render_events(spec, {ev});
}

}  // namespace seld::testing

#endif  // SELD_TESTS_SUPPORT_HPP_
