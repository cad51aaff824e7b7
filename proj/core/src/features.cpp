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

#include "seld/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "seld/error.hpp"

namespace seld {

void StftConfig::validate() const {
  if (!(frame_len > 0.0)) throw ValidationError("frame length must be positive");
  if (!(hop > 0.0 && hop <= frame_len)) throw ValidationError("hop must satisfy 0 < hop <= frame length");
  if (n_mels < 8) throw ValidationError("n_mels must be at least 8");
  if (sample_rate <= 0) throw ValidationError("sample rate must be positive");
  if (frame_samples() < 16) throw ValidationError("frame too short for the sample rate");
  if (hop_samples() < 1) throw ValidationError("hop too short for the sample rate");
}

int StftConfig::frame_samples() const { return static_cast<int>(std::lround(frame_len * sample_rate)); }
int StftConfig::hop_samples() const { return static_cast<int>(std::lround(hop * sample_rate)); }

int StftConfig::num_frames(std::size_t num_samples) const {
  const auto n = static_cast<std::size_t>(frame_samples());
  if (num_samples < n)
    throw ValidationError("clip of " + std::to_string(num_samples) +
                          " samples is shorter than one frame (" + std::to_string(n) + ")");
  return static_cast<int>((num_samples - n) / static_cast<std::size_t>(hop_samples())) + 1;
}

std::vector<double> make_window(const StftConfig& cfg) {
  const int n = cfg.frame_samples();
  const double a0 = cfg.window == WindowKind::kHann ? 0.5 : 0.54;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = a0 - (1.0 - a0) * std::cos(2.0 * kPi * i / n);
  return w;
}

ComplexSpectrogram::ComplexSpectrogram(int channels, int frames, int bins)
    : channels_(channels), frames_(frames), bins_(bins),
      data_(static_cast<std::size_t>(channels) * frames * bins) {}

PlaneStack::PlaneStack(int planes, int frames, int bins, double fill)
    : planes_(planes), frames_(frames), bins_(bins),
      data_(static_cast<std::size_t>(planes) * frames * bins, fill) {}

double MelFilterbank::hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelFilterbank::mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(int n_mels, int num_bins, int sample_rate)
    : n_mels_(n_mels), num_bins_(num_bins),
      weights_(static_cast<std::size_t>(n_mels) * num_bins, 0.0),
      first_(n_mels, 0), last_(n_mels, -1) {
  if (n_mels < 1 || num_bins < 2) throw ValidationError("invalid filterbank dimensions");
  const double nyquist = sample_rate / 2.0;
  const double top = hz_to_mel(nyquist);
  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) edges[i] = mel_to_hz(top * i / (n_mels + 1));
  const double bin_hz = nyquist / (num_bins - 1);
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (int k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      const double w = std::max(0.0, std::min((f - left) / (center - left), (right - f) / (right - center)));
      if (w > 0.0) {
        weights_[static_cast<std::size_t>(m) * num_bins + k] = w;
        if (last_[m] < 0) first_[m] = k;
        last_[m] = k;
      }
    }
    if (last_[m] < 0)
      throw ValidationError("mel filter " + std::to_string(m) +
                            " covers no FFT bin; reduce n_mels or lengthen the frame");
  }
}

namespace {

void check_spectrogram(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  cfg.validate();
  if (spec.channels() != kFoaChannels) throw ShapeError("expected a 4-channel spectrogram");
  if (spec.bins() != cfg.num_bins()) throw ShapeError("spectrogram bin count does not match config");
}

}  // namespace

ComplexSpectrogram stft(const AudioClip& clip, const StftConfig& cfg) {
  cfg.validate();
  if (clip.sample_rate() != cfg.sample_rate)
    throw ValidationError("sample rate " + std::to_string(clip.sample_rate()) +
                          " Hz does not match configured " + std::to_string(cfg.sample_rate) + " Hz");
  const int n = cfg.frame_samples();
  const int hop = cfg.hop_samples();
  const int frames = cfg.num_frames(clip.num_samples());
  const int bins = cfg.num_bins();
  const auto window = make_window(cfg);
  const auto& fft = internal::RealFft::for_size(n);

  ComplexSpectrogram spec(kFoaChannels, frames, bins);
  std::vector<double> buf(n);
  std::vector<std::complex<double>> out(bins);
  for (int ch = 0; ch < kFoaChannels; ++ch) {
    const auto x = clip.channel(ch);
    for (int t = 0; t < frames; ++t) {
      const std::size_t start = static_cast<std::size_t>(t) * hop;
      for (int i = 0; i < n; ++i) buf[i] = x[start + i] * window[i];
      fft.forward(buf.data(), out.data());
      for (int k = 0; k < bins; ++k) spec.at(ch, t, k) = out[k];
    }
  }
  return spec;
}

PlaneStack log_mel(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  check_spectrogram(spec, cfg);
  const MelFilterbank fb(cfg.n_mels, spec.bins(), cfg.sample_rate);
  PlaneStack out(kFoaChannels, spec.frames(), cfg.n_mels);
  for (int ch = 0; ch < kFoaChannels; ++ch) {
    for (int t = 0; t < spec.frames(); ++t) {
      for (int m = 0; m < cfg.n_mels; ++m) {
        double power = 0.0;
        for (int k = fb.first_bin(m); k <= fb.last_bin(m); ++k)
          power += fb.weight(m, k) * std::norm(spec.at(ch, t, k));
        out.at(ch, t, m) = std::log(power + kLogMelEpsilon);
      }
    }
  }
  return out;
}

PlaneStack intensity_vectors(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  check_spectrogram(spec, cfg);
  const MelFilterbank fb(cfg.n_mels, spec.bins(), cfg.sample_rate);
  constexpr int kDipoles[3] = {kX, kY, kZ};
  PlaneStack out(3, spec.frames(), cfg.n_mels);
  std::vector<double> raw(static_cast<std::size_t>(3) * spec.bins());
  for (int t = 0; t < spec.frames(); ++t) {
    for (int k = 0; k < spec.bins(); ++k) {
      const auto w = std::conj(spec.at(kW, t, k));
      for (int a = 0; a < 3; ++a) raw[a * spec.bins() + k] = (w * spec.at(kDipoles[a], t, k)).real();
    }
    for (int m = 0; m < cfg.n_mels; ++m) {
      double iv[3] = {0.0, 0.0, 0.0};
      for (int k = fb.first_bin(m); k <= fb.last_bin(m); ++k)
        for (int a = 0; a < 3; ++a) iv[a] += fb.weight(m, k) * raw[a * spec.bins() + k];
      const double norm = std::sqrt(iv[0] * iv[0] + iv[1] * iv[1] + iv[2] * iv[2]);
      for (int a = 0; a < 3; ++a) out.at(a, t, m) = iv[a] / (norm + kIntensityEpsilon);
    }
  }
  return out;
}

SpectralFeatures::SpectralFeatures(int frames, int mels)
    : frames_(frames), mels_(mels),
      data_(static_cast<std::size_t>(frames) * kFeatureChannels * mels, 0.0) {}

FlatTensor SpectralFeatures::to_tensor() const {
  return {{static_cast<std::size_t>(frames_), static_cast<std::size_t>(kFeatureChannels),
           static_cast<std::size_t>(mels_)},
          data_};
}

SpectralFeatures SpectralFeatures::from_tensor(const FlatTensor& tensor) {
  if (tensor.dims.size() != 3 || tensor.dims[1] != kFeatureChannels)
    throw ShapeError("feature tensor must have shape T x 7 x F");
  SpectralFeatures f(static_cast<int>(tensor.dims[0]), static_cast<int>(tensor.dims[2]));
  if (tensor.data.size() != f.data_.size()) throw ShapeError("feature tensor data size mismatch");
  f.data_ = tensor.data;
  return f;
}

SpectralFeatures extract(const AudioClip& clip, const StftConfig& cfg) {
  const auto spec = stft(clip, cfg);
  const auto mel = log_mel(spec, cfg);
  const auto iv = intensity_vectors(spec, cfg);
  SpectralFeatures out(spec.frames(), cfg.n_mels);
  for (int t = 0; t < spec.frames(); ++t) {
    for (int f = 0; f < cfg.n_mels; ++f) {
      for (int ch = 0; ch < kFoaChannels; ++ch) out.at(t, ch, f) = mel.at(ch, t, f);
      for (int a = 0; a < 3; ++a) out.at(t, kFoaChannels + a, f) = iv.at(a, t, f);
    }
  }
  return out;
}

Vec3 estimate_doa(const SpectralFeatures& features, int first_frame, int last_frame) {
  first_frame = std::max(first_frame, 0);
  last_frame = std::min(last_frame, features.frames());
  Vec3 sum;
  for (int t = first_frame; t < last_frame; ++t) {
    for (int f = 0; f < features.mels(); ++f) {
      const double weight = std::max(0.0, std::exp(features.at(t, kW, f)) - kLogMelEpsilon);
      sum = sum + Vec3{features.at(t, 4, f), features.at(t, 5, f), features.at(t, 6, f)} * weight;
    }
  }
  const double n = sum.norm();
  return n > 0.0 ? sum / n : Vec3{};
}

Vec3 estimate_doa(const SpectralFeatures& features) {
  return estimate_doa(features, 0, features.frames());
}

}  // namespace seld
