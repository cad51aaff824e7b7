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

#include "seld/augmentation.hpp"

#include "seld/error.hpp"

namespace seld {
namespace {

// Rows give the source axis and sign for new x and new y.
struct HorizontalMap {
  int x_axis, x_sign, y_axis, y_sign;
  const char* text;
};
constexpr HorizontalMap kHorizontal[AcsVariant::kHorizontalCount] = {
    {0, +1, 1, +1, "(X, Y)"},  {0, +1, 1, -1, "(X, -Y)"}, {0, -1, 1, +1, "(-X, Y)"},
    {0, -1, 1, -1, "(-X, -Y)"}, {1, +1, 0, +1, "(Y, X)"},  {1, +1, 0, -1, "(Y, -X)"},
    {1, -1, 0, +1, "(-Y, X)"},  {1, -1, 0, -1, "(-Y, -X)"},
};

}  // namespace

AcsVariant::AcsVariant(int id) : id_(id) {
  if (id < 0 || id >= kWithElevationFlipCount)
    throw RangeError("ACS variant id " + std::to_string(id) + " outside [0, 16)");
  const auto& h = kHorizontal[id % kHorizontalCount];
  m_[0][h.x_axis] = h.x_sign;
  m_[1][h.y_axis] = h.y_sign;
  m_[2][2] = flips_elevation() ? -1 : 1;
}

Vec3 AcsVariant::apply(const Vec3& v) const {
  double out[3];
  for (int r = 0; r < 3; ++r)
    out[r] = m_[r][0] * v.x + m_[r][1] * v.y + m_[r][2] * v.z;
  return {out[0], out[1], out[2]};
}

int AcsVariant::determinant() const {
  const auto& m = m_;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

AcsVariant AcsVariant::from_matrix(const std::array<std::array<int, 3>, 3>& m) {
  for (int id = 0; id < kWithElevationFlipCount; ++id) {
    AcsVariant candidate(id);
    if (candidate.m_ == m) return candidate;
  }
  throw ValidationError("matrix is not an ACS variant");
}

AcsVariant AcsVariant::inverse() const {
  std::array<std::array<int, 3>, 3> t{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t[r][c] = m_[c][r];
  return from_matrix(t);
}

AcsVariant AcsVariant::compose(const AcsVariant& other) const {
  std::array<std::array<int, 3>, 3> p{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) p[r][c] += m_[r][k] * other.m_[k][c];
  return from_matrix(p);
}

std::string AcsVariant::describe() const {
  std::string s = kHorizontal[id_ % kHorizontalCount].text;
  if (flips_elevation()) s += " Z->-Z";
  return s;
}

std::vector<AcsVariant> AcsVariant::all(bool with_elevation_flip) {
  std::vector<AcsVariant> out;
  const int n = with_elevation_flip ? kWithElevationFlipCount : kHorizontalCount;
  for (int id = 0; id < n; ++id) out.emplace_back(id);
  return out;
}

AudioClip acs_audio(const AudioClip& clip, const AcsVariant& variant) {
  constexpr int kAxisChannel[3] = {kX, kY, kZ};
  std::array<std::vector<double>, kFoaChannels> channels;
  const auto w = clip.channel(kW);
  channels[kW].assign(w.begin(), w.end());
  for (int r = 0; r < 3; ++r) {
    auto& dst = channels[kAxisChannel[r]];
    dst.assign(clip.num_samples(), 0.0);
    for (int c = 0; c < 3; ++c) {
      const int sign = variant.matrix(r, c);
      if (sign == 0) continue;
      const auto src = clip.channel(kAxisChannel[c]);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = sign > 0 ? src[i] : -src[i];
    }
  }
  return AudioClip(clip.sample_rate(), std::move(channels));
}

Clip acs_labels(const Clip& clip, const AcsVariant& variant) {
  std::vector<EventAnnotation> events = clip.events();
  for (auto& e : events)
    if (e.doa) e.doa = variant.apply(*e.doa);
  return Clip(clip.classes(), clip.grid(), std::move(events));
}

}  // namespace seld
