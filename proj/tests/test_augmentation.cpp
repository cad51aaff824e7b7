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

#include <gtest/gtest.h>

#include <set>

#include "seld/augmentation.hpp"
#include "seld/error.hpp"
#include "seld/features.hpp"
#include "support.hpp"

namespace seld {
namespace {

TEST(AcsVariant, EightHorizontalVariantsByDefault) {
  const auto all = AcsVariant::all();
  ASSERT_EQ(all.size(), 8u);
  std::set<std::string> names;
  for (const auto& v : all) {
    EXPECT_FALSE(v.flips_elevation());
    EXPECT_EQ(v.matrix(2, 2), 1);
    names.insert(v.describe());
  }
  EXPECT_EQ(names.size(), 8u);
  EXPECT_EQ(AcsVariant::all(true).size(), 16u);
  EXPECT_THROW(AcsVariant(16), RangeError);
  EXPECT_THROW(AcsVariant(-1), RangeError);
}

TEST(AcsVariant, OrthogonalWithUnitDeterminant) {
  for (const auto& v : AcsVariant::all(true)) {
    EXPECT_EQ(std::abs(v.determinant()), 1);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) {
        int dot = 0;
        for (int k = 0; k < 3; ++k) dot += v.matrix(r, k) * v.matrix(s, k);
        EXPECT_EQ(dot, r == s ? 1 : 0);
      }
  }
}

TEST(AcsVariant, ClosedUnderCompositionWithInverses) {
  for (bool flips : {false, true}) {
    const auto all = AcsVariant::all(flips);
    for (const auto& a : all) {
      EXPECT_EQ(a.compose(a.inverse()).id(), 0);
      EXPECT_EQ(a.inverse().compose(a).id(), 0);
      for (const auto& b : all) {
        const auto ab = a.compose(b);
        EXPECT_LT(ab.id(), static_cast<int>(all.size()));
        const Vec3 v{0.3, -0.5, 0.81};
        const Vec3 direct = ab.apply(v);
        const Vec3 nested = a.apply(b.apply(v));
        EXPECT_EQ(direct, nested);
      }
    }
  }
}

TEST(AcsLabels, SwapExample) {
  const Clip clip(ClassMap::with_count(1), FrameGrid::from_frames(2), {{1, 0, 0, 1.0, Vec3{0.6, 0.8, 0}, 3.5}});
  const Clip out = acs_labels(clip, AcsVariant(4));
  EXPECT_EQ(*out.events()[0].doa, (Vec3{0.8, 0.6, 0}));
  EXPECT_EQ(*out.events()[0].distance, 3.5);
  EXPECT_EQ(acs_labels(clip, AcsVariant(0)).events(), clip.events());
}

TEST(AcsLabels, DistanceInvariantForEveryVariant) {
  Rng rng(1);
  const Clip clip = testing::random_clip(rng, 3, 8, 1, 0.6);
  for (const auto& v : AcsVariant::all(true)) {
    const Clip out = acs_labels(clip, v);
    ASSERT_EQ(out.events().size(), clip.events().size());
    for (std::size_t i = 0; i < clip.events().size(); ++i) {
      EXPECT_EQ(out.events()[i].distance, clip.events()[i].distance);
      EXPECT_NEAR(out.events()[i].doa->norm(), 1.0, 1e-12);
    }
  }
}

TEST(AcsAudio, IdentityAndInverse) {
  const auto scene = testing::render_single_source(3, Vec3::from_spherical(0.7, 0.2), 1.5, 0.5);
  EXPECT_TRUE(acs_audio(scene.audio, AcsVariant(0)) == scene.audio);
  for (const auto& v : AcsVariant::all(true)) {
    const auto back = acs_audio(acs_audio(scene.audio, v), v.inverse());
    EXPECT_TRUE(back == scene.audio) << v.describe();
    const auto w0 = scene.audio.channel(kW);
    const auto rotated = acs_audio(scene.audio, v);
    const auto w1 = rotated.channel(kW);
    EXPECT_TRUE(std::equal(w0.begin(), w0.end(), w1.begin()));
  }
}

TEST(AcsAudio, SwapRotatesAzimuth) {
  const Vec3 doa = Vec3::from_spherical(deg_to_rad(30.0), 0.0);
  const auto scene = testing::render_single_source(4, doa, 2.0);
  const Vec3 est = estimate_doa(extract(acs_audio(scene.audio, AcsVariant(4))));
  EXPECT_NEAR(rad_to_deg(est.azimuth()), 60.0, 1.0);
}

TEST(AcsAudio, MatchesLabelTransform) {
  Rng rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    Vec3 doa = testing::random_unit(rng);
    const auto scene = testing::render_single_source(100 + trial, doa, rng.uniform(1.0, 3.0));
    for (const auto& v : AcsVariant::all(true)) {
      const Vec3 est = estimate_doa(extract(acs_audio(scene.audio, v)));
      EXPECT_LT(angular_distance_deg(est, v.apply(doa)), 1.0) << v.describe();
    }
  }
}

}  // namespace
}  // namespace seld
