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

#include "seld/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "seld/error.hpp"
#include "seld/file_io.hpp"

namespace seld {

AudioClip::AudioClip(int sample_rate, std::array<std::vector<double>, kFoaChannels> channels)
    : sample_rate_(sample_rate), channels_(std::move(channels)) {
  if (sample_rate_ <= 0) throw ValidationError("sample rate must be positive");
  for (const auto& ch : channels_) {
    if (ch.size() != channels_[0].size())
      throw ShapeError("all FOA channels must have the same length");
    for (double v : ch)
      if (!std::isfinite(v)) throw ValidationError("audio samples must be finite");
  }
}

AudioClip::AudioClip(int sample_rate, std::size_t num_samples) : sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) throw ValidationError("sample rate must be positive");
  for (auto& ch : channels_) ch.assign(num_samples, 0.0);
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const char> bytes) : bytes_(bytes) {}

  std::uint32_t u32(std::size_t at) const { return static_cast<std::uint32_t>(le(at, 4)); }
  std::uint16_t u16(std::size_t at) const { return static_cast<std::uint16_t>(le(at, 2)); }
  bool tag(std::size_t at, const char* t) const {
    check(at, 4);
    return std::memcmp(bytes_.data() + at, t, 4) == 0;
  }
  void check(std::size_t at, std::size_t n) const {
    if (at + n > bytes_.size()) throw IoError("truncated WAV data");
  }
  const unsigned char* ptr(std::size_t at) const {
    return reinterpret_cast<const unsigned char*>(bytes_.data() + at);
  }
  std::size_t size() const { return bytes_.size(); }

 private:
  std::uint64_t le(std::size_t at, int n) const {
    check(at, n);
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | ptr(at)[i];
    return v;
  }
  std::span<const char> bytes_;
};

double decode_sample(const unsigned char* p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      float f;
      std::memcpy(&f, p, 4);
      return f;
    }
    double d;
    std::memcpy(&d, p, 8);
    return d;
  }
  switch (bits) {
    case 16: {
      const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32: {
      std::int32_t v;
      std::memcpy(&v, p, 4);
      return v / 2147483648.0;
    }
  }
  throw IoError("unsupported PCM bit depth " + std::to_string(bits));
}

void put_le(std::vector<char>& out, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

AudioClip decode_wav(std::span<const char> bytes) {
  ByteReader r(bytes);
  if (!r.tag(0, "RIFF") || !r.tag(8, "WAVE")) throw IoError("not a RIFF/WAVE file");
  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  while (pos + 8 <= r.size()) {
    const std::uint32_t size = r.u32(pos + 4);
    const std::size_t body = pos + 8;
    if (r.tag(pos, "fmt ")) {
      if (size < 16) throw IoError("WAV fmt chunk too short");
      format = r.u16(body);
      channels = r.u16(body + 2);
      rate = r.u32(body + 4);
      block_align = r.u16(body + 12);
      bits = r.u16(body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw IoError("WAV extensible fmt chunk too short");
        format = r.u16(body + 24);
      }
      have_fmt = true;
    } else if (r.tag(pos, "data")) {
      if (!have_fmt) throw IoError("WAV data chunk precedes fmt chunk");
      if (format != kFormatPcm && format != kFormatFloat)
        throw IoError("unsupported WAV sample format " + std::to_string(format));
      if (format == kFormatFloat && bits != 32 && bits != 64)
        throw IoError("unsupported float bit depth " + std::to_string(bits));
      if (channels != kFoaChannels)
        throw ValidationError("expected 4-channel FOA audio, got " + std::to_string(channels) +
                              " channels");
      const int bytes_per_sample = bits / 8;
      if (block_align != channels * bytes_per_sample) throw IoError("inconsistent WAV block align");
      std::size_t data_size = size;
      if (body + data_size > r.size()) data_size = r.size() - body;
      const std::size_t frames = data_size / block_align;
      std::array<std::vector<double>, kFoaChannels> out;
      for (auto& ch : out) ch.resize(frames);
      for (std::size_t i = 0; i < frames; ++i)
        for (int c = 0; c < kFoaChannels; ++c)
          out[c][i] = decode_sample(r.ptr(body + i * block_align + c * bytes_per_sample), format, bits);
      return AudioClip(static_cast<int>(rate), std::move(out));
    }
    pos = body + size + (size & 1);
  }
  throw IoError("WAV file has no data chunk");
}

AudioClip read_wav(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  try {
    return decode_wav(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<char> encode_wav(const AudioClip& clip, WavEncoding encoding) {
  const int bytes_per_sample = encoding == WavEncoding::kPcm16 ? 2 : encoding == WavEncoding::kPcm24 ? 3 : 4;
  const std::uint16_t format = encoding == WavEncoding::kFloat32 ? kFormatFloat : kFormatPcm;
  const std::size_t frames = clip.num_samples();
  const std::uint32_t block_align = kFoaChannels * bytes_per_sample;
  const std::uint64_t data_size = frames * block_align;
  if (data_size > 0xFFFFFFFFull - 64) throw ValidationError("audio too long for a WAV file");

  std::vector<char> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_le(out, 36 + data_size, 4);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_le(out, 16, 4);
  put_le(out, format, 2);
  put_le(out, kFoaChannels, 2);
  put_le(out, static_cast<std::uint32_t>(clip.sample_rate()), 4);
  put_le(out, static_cast<std::uint64_t>(clip.sample_rate()) * block_align, 4);
  put_le(out, block_align, 2);
  put_le(out, bytes_per_sample * 8, 2);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_le(out, data_size, 4);
  for (std::size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < kFoaChannels; ++c) {
      const double v = clip.channel(c)[i];
      if (encoding == WavEncoding::kFloat32) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_le(out, bits, 4);
      } else {
        const double scale = encoding == WavEncoding::kPcm16 ? 32768.0 : 8388608.0;
        const double lim = scale - 1.0;
        const auto q = static_cast<std::int32_t>(std::lround(std::clamp(v * scale, -scale, lim)));
        put_le(out, static_cast<std::uint32_t>(q), bytes_per_sample);
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip, WavEncoding encoding) {
  const auto bytes = encode_wav(clip, encoding);
  write_file_atomic(path, std::string_view(bytes.data(), bytes.size()));
}

}  // namespace seld
