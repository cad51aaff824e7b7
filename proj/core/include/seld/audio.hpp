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

#ifndef SELD_AUDIO_HPP_
#define SELD_AUDIO_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace seld {

constexpr int kFoaChannels = 4;
constexpr int kDefaultSampleRate = 24000;

// Channel indices in ACN order.
enum FoaChannel : int { kW = 0, kY = 1, kZ = 2, kX = 3 };

// Four-channel first-order Ambisonics audio. Channels are stored in ACN order
// (W, Y, Z, X) with SN3D normalization, so a plane wave s(t) from direction
// (x, y, z) appears as W = s, Y = y*s, Z = z*s, X = x*s.
class AudioClip {
 public:
  AudioClip(int sample_rate, std::array<std::vector<double>, kFoaChannels> channels);
  // Silent clip.
  AudioClip(int sample_rate, std::size_t num_samples);

  int sample_rate() const { return sample_rate_; }
  std::size_t num_samples() const { return channels_[0].size(); }
  double duration() const { return static_cast<double>(num_samples()) / sample_rate_; }

  std::span<const double> channel(int index) const { return channels_.at(index); }
  std::span<double> channel(int index) { return channels_.at(index); }

  bool operator==(const AudioClip&) const = default;

 private:
  int sample_rate_;
  std::array<std::vector<double>, kFoaChannels> channels_;
};

enum class WavEncoding { kPcm16, kPcm24, kFloat32 };

// Reads RIFF/WAVE with PCM 16/24/32-bit or IEEE float 32/64-bit samples,
// including WAVE_FORMAT_EXTENSIBLE headers. Requires exactly four channels.
AudioClip read_wav(const std::filesystem::path& path);
AudioClip decode_wav(std::span<const char> bytes);

std::vector<char> encode_wav(const AudioClip& clip, WavEncoding encoding = WavEncoding::kFloat32);
void write_wav(const std::filesystem::path& path, const AudioClip& clip,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace seld

#endif  // SELD_AUDIO_HPP_
