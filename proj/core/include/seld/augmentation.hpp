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

#ifndef SELD_AUGMENTATION_HPP_
#define SELD_AUGMENTATION_HPP_

#include <array>
#include <string>
#include <vector>

#include "seld/audio.hpp"
#include "seld/types.hpp"

namespace seld {

// Audio channel swapping. Each variant is a signed permutation M of the
// (x, y, z) axes; the dipole channels are remapped as (X', Y', Z') = M (X, Y, Z)
// with W untouched, which turns a plane wave from R into one from M R.
//
// Variants 0..7 permute/negate the horizontal axes with z fixed:
//   0 (X, Y)   1 (X, -Y)   2 (-X, Y)   3 (-X, -Y)
//   4 (Y, X)   5 (Y, -X)   6 (-Y, X)   7 (-Y, -X)
// Variants 8..15 are the same maps followed by an elevation flip z -> -z and
// are only produced when explicitly requested.
class AcsVariant {
 public:
  static constexpr int kHorizontalCount = 8;
  static constexpr int kWithElevationFlipCount = 16;

  explicit AcsVariant(int id);

  int id() const { return id_; }
  bool flips_elevation() const { return id_ >= kHorizontalCount; }
  Vec3 apply(const Vec3& v) const;
  // Entry (row, col) of the orthogonal map.
  int matrix(int row, int col) const { return m_[row][col]; }
  int determinant() const;
  AcsVariant inverse() const;
  // this after other: v -> this(other(v)).
  AcsVariant compose(const AcsVariant& other) const;
  std::string describe() const;

  // The default eight, or all sixteen when `with_elevation_flip`.
  static std::vector<AcsVariant> all(bool with_elevation_flip = false);

 private:
  static AcsVariant from_matrix(const std::array<std::array<int, 3>, 3>& m);
  int id_;
  std::array<std::array<int, 3>, 3> m_{};
};

AudioClip acs_audio(const AudioClip& clip, const AcsVariant& variant);
Clip acs_labels(const Clip& clip, const AcsVariant& variant);

}  // namespace seld

#endif  // SELD_AUGMENTATION_HPP_
