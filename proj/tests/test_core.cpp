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

#include <sstream>

#include "seld/audio.hpp"
#include "seld/error.hpp"
#include "seld/file_io.hpp"
#include "seld/label_io.hpp"
#include "seld/tensor_io.hpp"
#include "seld/types.hpp"
#include "support.hpp"

namespace seld {
namespace {

using testing::random_clip;

TEST(Vec3, SphericalAxes) {
  const Vec3 x = Vec3::from_spherical(0.0, 0.0);
  EXPECT_NEAR(x.x, 1.0, 1e-15);
  EXPECT_NEAR(x.y, 0.0, 1e-15);
  const Vec3 y = Vec3::from_spherical(kPi / 2, 0.0);
  EXPECT_NEAR(y.y, 1.0, 1e-15);
  const Vec3 z = Vec3::from_spherical(0.3, kPi / 2);
  EXPECT_NEAR(z.z, 1.0, 1e-15);
  EXPECT_NEAR(Vec3::from_spherical(1.2, -0.4).elevation(), -0.4, 1e-12);
  EXPECT_NEAR(Vec3::from_spherical(1.2, -0.4).azimuth(), 1.2, 1e-12);
}

TEST(Vec3, AngularDistance) {
  EXPECT_NEAR(angular_distance_deg({1, 0, 0}, {0, 1, 0}), 90.0, 1e-12);
  EXPECT_NEAR(angular_distance_deg({1, 0, 0}, {1, 0, 0}), 0.0, 1e-12);
  EXPECT_NEAR(angular_distance_deg({1, 0, 0}, {-1, 0, 0}), 180.0, 1e-12);
  EXPECT_NEAR(angular_distance_deg({1, 0, 0}, {3, 0, 0}), 0.0, 1e-12);
}

TEST(ClassMap, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(ClassMap(std::vector<std::string>{}), ValidationError);
  EXPECT_THROW(ClassMap({"a", "b", "a"}), ValidationError);
  const ClassMap m({"dog", "bell"});
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m.index_of("bell"), 1);
  EXPECT_FALSE(m.index_of("cat").has_value());
  EXPECT_EQ(ClassMap::with_count(3).name(2), "class2");
}

TEST(FrameGrid, CeilOfDuration) {
  EXPECT_EQ(FrameGrid::from_duration(10.0).frames, 100);
  EXPECT_EQ(FrameGrid::from_duration(1.05).frames, 11);
  EXPECT_EQ(FrameGrid::from_duration(0.3).frames, 3);
  EXPECT_THROW(FrameGrid::from_duration(1.0, 0.0), ValidationError);
}

TEST(Clip, ValidatesAnnotations) {
  const auto classes = ClassMap::with_count(2);
  const auto grid = FrameGrid::from_frames(5);
  EventAnnotation e{1, 1, 0, 1.0, Vec3{1, 0, 0}, 2.0};
  EXPECT_NO_THROW(Clip(classes, grid, {e}));
  auto bad = e;
  bad.class_id = 2;
  EXPECT_THROW(Clip(classes, grid, {bad}), RangeError);
  bad = e;
  bad.frame = 5;
  EXPECT_THROW(Clip(classes, grid, {bad}), RangeError);
  bad = e;
  bad.doa = Vec3{1, 1, 0};
  EXPECT_THROW(Clip(classes, grid, {bad}), ValidationError);
  bad = e;
  bad.distance = 0.0;
  EXPECT_THROW(Clip(classes, grid, {bad}), ValidationError);
  EXPECT_THROW(Clip(classes, grid, {e, e, e, e}), ValidationError);
  EXPECT_EQ(Clip(classes, grid, {e, e, e}).max_polyphony_per_class(), 3);
}

TEST(Labels, ParseAxisExamples) {
  const auto classes = ClassMap::with_count(3);
  const auto grid = FrameGrid::from_frames(20);
  const Clip clip = parse_labels("10,2,0,0,0,1.5\n0,0,0,90,0,2.0\n5,1,0,45,45,3.0\n", grid, classes);
  ASSERT_EQ(clip.events().size(), 3u);
  const auto& a = clip.events()[0];
  EXPECT_EQ(a.frame, 10);
  EXPECT_EQ(a.class_id, 2);
  EXPECT_NEAR(a.doa->x, 1.0, 1e-12);
  EXPECT_NEAR(a.doa->y, 0.0, 1e-12);
  EXPECT_NEAR(a.doa->z, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(*a.distance, 1.5);
  const auto& b = clip.events()[1];
  EXPECT_NEAR(b.doa->x, 0.0, 1e-12);
  EXPECT_NEAR(b.doa->y, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(*b.distance, 2.0);
  const auto& c = clip.events()[2];
  EXPECT_NEAR(c.doa->x, 0.5, 1e-8);
  EXPECT_NEAR(c.doa->y, 0.5, 1e-8);
  EXPECT_NEAR(c.doa->z, 0.70710678, 1e-8);
  EXPECT_DOUBLE_EQ(c.activity, 1.0);
}

TEST(Labels, ParseErrorsCarryLineNumbers) {
  const auto classes = ClassMap::with_count(3);
  const auto grid = FrameGrid::from_frames(20);
  try {
    parse_labels("1,0,0,0,0,1\n2,0,0,zero,0,1\n", grid, classes);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_labels("1,0,0,0,0\n", grid, classes), ParseError);
  EXPECT_THROW(parse_labels("1,3,0,0,0,1\n", grid, classes), RangeError);
  EXPECT_THROW(parse_labels("1,0,0,0,0,0\n", grid, classes), ValidationError);
  EXPECT_THROW(parse_labels("1,0,0,0,0,-2\n", grid, classes), ValidationError);
  EXPECT_THROW(parse_labels("1.5,0,0,0,0,1\n", grid, classes), ParseError);
}

TEST(Labels, HeaderAndCrlfAccepted) {
  const auto clip = parse_labels("frame,class,source,azimuth_deg,elevation_deg,distance_m\r\n3,1,0,0,0,2\r\n",
                                 FrameGrid::from_frames(5), ClassMap::with_count(2));
  ASSERT_EQ(clip.events().size(), 1u);
  EXPECT_EQ(clip.events()[0].frame, 3);
}

TEST(Labels, MissingFieldsRoundTrip) {
  const auto grid = FrameGrid::from_frames(5);
  const auto classes = ClassMap::with_count(2);
  const auto clip = parse_labels("1,0,0,,,2.5\n2,1,0,30,10,\n", grid, classes);
  EXPECT_FALSE(clip.events()[0].doa.has_value());
  EXPECT_FALSE(clip.events()[1].distance.has_value());
  const auto again = parse_labels(write_labels(clip), grid, classes);
  EXPECT_FALSE(again.events()[0].doa.has_value());
  EXPECT_FALSE(again.events()[1].distance.has_value());
  EXPECT_THROW(parse_labels("1,0,0,30,,2\n", grid, classes), ParseError);
}

TEST(Labels, WriteSingleAnnotation) {
  const Clip clip(ClassMap::with_count(2), FrameGrid::from_frames(5), {{4, 1, 0, 1.0, Vec3{1, 0, 0}, 1.5}});
  EXPECT_EQ(write_labels(clip), "4,1,0,0,0,1.5\n");
  EXPECT_EQ(write_labels(Clip(ClassMap::with_count(1), FrameGrid::from_frames(1))), "");
}

TEST(Labels, RandomRoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Clip clip = random_clip(rng, 4, 30, 2, 0.2);
    const Clip back = parse_labels(write_labels(clip), clip.grid(), clip.classes());
    ASSERT_EQ(back.events().size(), clip.events().size());
    for (std::size_t i = 0; i < clip.events().size(); ++i) {
      const auto& a = clip.events()[i];
      const auto& b = back.events()[i];
      EXPECT_EQ(a.frame, b.frame);
      EXPECT_EQ(a.class_id, b.class_id);
      EXPECT_EQ(a.source, b.source);
      EXPECT_LT(angular_distance_deg(*a.doa, *b.doa), 1e-4);
      EXPECT_NEAR(*a.distance, *b.distance, 1e-4);
    }
  }
}

TEST(Labels, FormatDecimal) {
  EXPECT_EQ(format_decimal(1.5), "1.5");
  EXPECT_EQ(format_decimal(2.0), "2");
  EXPECT_EQ(format_decimal(-0.0000001), "0");
  EXPECT_EQ(format_decimal(-12.25), "-12.25");
}

TEST(Labels, FileRoundTripAndErrorsNamePath) {
  testing::TempDir dir("labels");
  const Clip clip(ClassMap::with_count(2), FrameGrid::from_frames(5), {{4, 1, 0, 1.0, Vec3{0, 1, 0}, 1.5}});
  write_label_file(dir.path() / "sub" / "a.csv", clip);
  const Clip back = read_label_file(dir.path() / "sub" / "a.csv", clip.grid(), clip.classes());
  EXPECT_EQ(back.events().size(), 1u);
  write_file_atomic(dir.path() / "bad.csv", "x,0,0,0,0,1\n");
  try {
    read_label_file(dir.path() / "bad.csv", clip.grid(), clip.classes());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.csv"), std::string::npos);
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(read_label_file(dir.path() / "missing.csv", clip.grid(), clip.classes()), IoError);
}

TEST(TensorIo, RoundTripBothDtypes) {
  FlatTensor t{{2, 3, 4}, {}};
  for (int i = 0; i < 24; ++i) t.data.push_back(i * 0.25 - 1.0);
  for (auto dtype : {TensorDtype::kFloat32, TensorDtype::kFloat64}) {
    std::stringstream ss;
    write_tensor(ss, t, dtype);
    const auto back = read_tensor(ss);
    EXPECT_EQ(back.dims, t.dims);
    EXPECT_EQ(back.data, t.data);
  }
}

TEST(TensorIo, RejectsCorruptInput) {
  std::stringstream bad("NOTATENSOR");
  EXPECT_THROW(read_tensor(bad), IoError);
  FlatTensor t{{4}, {1, 2, 3, 4}};
  std::stringstream ss;
  write_tensor(ss, t);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream truncated(bytes);
  EXPECT_THROW(read_tensor(truncated), IoError);
  FlatTensor mismatch{{3}, {1, 2}};
  std::stringstream out;
  EXPECT_THROW(write_tensor(out, mismatch), ShapeError);
}

AudioClip random_audio(Rng& rng, std::size_t n) {
  std::array<std::vector<double>, kFoaChannels> ch;
  for (auto& c : ch) {
    c.resize(n);
    for (auto& v : c) v = rng.uniform(-0.9, 0.9);
  }
  return AudioClip(kDefaultSampleRate, ch);
}

TEST(Wav, FloatRoundTripIsExactToSinglePrecision) {
  Rng rng(5);
  const auto clip = random_audio(rng, 1000);
  const auto back = decode_wav(encode_wav(clip, WavEncoding::kFloat32));
  ASSERT_EQ(back.num_samples(), 1000u);
  EXPECT_EQ(back.sample_rate(), kDefaultSampleRate);
  for (int c = 0; c < kFoaChannels; ++c)
    for (std::size_t i = 0; i < 1000; ++i)
      EXPECT_EQ(back.channel(c)[i], static_cast<double>(static_cast<float>(clip.channel(c)[i])));
}

TEST(Wav, PcmRoundTripWithinQuantization) {
  Rng rng(6);
  const auto clip = random_audio(rng, 500);
  const auto b16 = decode_wav(encode_wav(clip, WavEncoding::kPcm16));
  const auto b24 = decode_wav(encode_wav(clip, WavEncoding::kPcm24));
  for (int c = 0; c < kFoaChannels; ++c)
    for (std::size_t i = 0; i < 500; ++i) {
      EXPECT_NEAR(b16.channel(c)[i], clip.channel(c)[i], 1.0 / 32768);
      EXPECT_NEAR(b24.channel(c)[i], clip.channel(c)[i], 1.0 / 8388608);
    }
}

TEST(Wav, RejectsWrongChannelCountAndGarbage) {
  const std::string junk = "RIFF0000WAVEjunk";
  EXPECT_THROW(decode_wav(std::span<const char>(junk.data(), junk.size())), IoError);
  auto bytes = encode_wav(AudioClip(24000, 4), WavEncoding::kPcm16);
  bytes[22] = 2;
  EXPECT_THROW(decode_wav(bytes), ValidationError);
}

TEST(Audio, RejectsUnequalOrNonFiniteChannels) {
  std::array<std::vector<double>, kFoaChannels> ch{std::vector<double>(3), std::vector<double>(3),
                                                   std::vector<double>(3), std::vector<double>(2)};
  EXPECT_THROW(AudioClip(24000, ch), ShapeError);
  ch[3].resize(3);
  ch[1][0] = std::nan("");
  EXPECT_THROW(AudioClip(24000, ch), ValidationError);
}

TEST(FileIo, AtomicWriteCreatesParentsAndReplaces) {
  testing::TempDir dir("fileio");
  const auto p = dir.path() / "a" / "b" / "c.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(p.parent_path())) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1);
  EXPECT_THROW(read_file(dir.path() / "nope"), IoError);
}

}  // namespace
}  // namespace seld
