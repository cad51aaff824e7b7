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

#ifndef SELD_FEATURES_HPP_
#define SELD_FEATURES_HPP_

#include <complex>
#include <cstddef>
#include <vector>

#include "seld/audio.hpp"
#include "seld/tensor_io.hpp"
#include "seld/types.hpp"

namespace seld {

enum class WindowKind { kHann, kHamming };

struct StftConfig {
  double frame_len = 0.040;  // seconds
  double hop = 0.020;        // seconds
  WindowKind window = WindowKind::kHann;
  int n_mels = 64;
  int sample_rate = kDefaultSampleRate;

  void validate() const;
  int frame_samples() const;
  int hop_samples() const;
  int num_bins() const { return frame_samples() / 2 + 1; }
  // floor((S - frame) / hop) + 1; throws when S < frame.
  int num_frames(std::size_t num_samples) const;

  bool operator==(const StftConfig&) const = default;
};

// Periodic window of the configured family, length frame_samples().
std::vector<double> make_window(const StftConfig& cfg);

// channels x frames x bins complex spectrogram, row-major.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram(int channels, int frames, int bins);

  int channels() const { return channels_; }
  int frames() const { return frames_; }
  int bins() const { return bins_; }
  std::complex<double>& at(int ch, int t, int k) { return data_[index(ch, t, k)]; }
  const std::complex<double>& at(int ch, int t, int k) const { return data_[index(ch, t, k)]; }

 private:
  std::size_t index(int ch, int t, int k) const {
    return (static_cast<std::size_t>(ch) * frames_ + t) * bins_ + k;
  }
  int channels_, frames_, bins_;
  std::vector<std::complex<double>> data_;
};

// planes x frames x bins real array, row-major.
class PlaneStack {
 public:
  PlaneStack(int planes, int frames, int bins, double fill = 0.0);

  int planes() const { return planes_; }
  int frames() const { return frames_; }
  int bins() const { return bins_; }
  double& at(int p, int t, int f) { return data_[(static_cast<std::size_t>(p) * frames_ + t) * bins_ + f]; }
  double at(int p, int t, int f) const { return data_[(static_cast<std::size_t>(p) * frames_ + t) * bins_ + f]; }
  const std::vector<double>& data() const { return data_; }

 private:
  int planes_, frames_, bins_;
  std::vector<double> data_;
};

// Triangular mel filterbank on the HTK mel scale, spanning 0 Hz to Nyquist.
class MelFilterbank {
 public:
  MelFilterbank(int n_mels, int num_bins, int sample_rate);

  int num_mels() const { return n_mels_; }
  int num_bins() const { return num_bins_; }
  double weight(int mel, int bin) const { return weights_[static_cast<std::size_t>(mel) * num_bins_ + bin]; }
  // Nonzero range [first, last] of bins for one filter.
  int first_bin(int mel) const { return first_[mel]; }
  int last_bin(int mel) const { return last_[mel]; }

  static double hz_to_mel(double hz);
  static double mel_to_hz(double mel);

 private:
  int n_mels_, num_bins_;
  std::vector<double> weights_;
  std::vector<int> first_, last_;
};

constexpr double kLogMelEpsilon = 1e-10;
constexpr double kIntensityEpsilon = 1e-8;
constexpr int kFeatureChannels = 7;

ComplexSpectrogram stft(const AudioClip& clip, const StftConfig& cfg);

// log(mel power + 1e-10) for each of the four FOA channels (ACN order).
PlaneStack log_mel(const ComplexSpectrogram& spec, const StftConfig& cfg);

// Active intensity Re{conj(W) * (X, Y, Z)}, mel-aggregated, then divided by
// its norm + 1e-8. Planes are ordered x, y, z.
PlaneStack intensity_vectors(const ComplexSpectrogram& spec, const StftConfig& cfg);

// frames x 7 x n_mels tensor: 4 log-mel planes (W, Y, Z, X) followed by the
// x, y, z intensity-vector planes.
class SpectralFeatures {
 public:
  SpectralFeatures(int frames, int mels);

  int frames() const { return frames_; }
  int channels() const { return kFeatureChannels; }
  int mels() const { return mels_; }
  double& at(int t, int ch, int f) { return data_[(static_cast<std::size_t>(t) * kFeatureChannels + ch) * mels_ + f]; }
  double at(int t, int ch, int f) const { return data_[(static_cast<std::size_t>(t) * kFeatureChannels + ch) * mels_ + f]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  FlatTensor to_tensor() const;
  static SpectralFeatures from_tensor(const FlatTensor& tensor);

  bool operator==(const SpectralFeatures&) const = default;

 private:
  int frames_, mels_;
  std::vector<double> data_;
};

SpectralFeatures extract(const AudioClip& clip, const StftConfig& cfg = {});

// Direction estimate from the IV planes: mean of intensity vectors over the
// frames [first, last) weighted by W mel power, renormalized to unit length.
// Returns the zero vector when there is no energy.
Vec3 estimate_doa(const SpectralFeatures& features, int first_frame, int last_frame);
Vec3 estimate_doa(const SpectralFeatures& features);

}  // namespace seld

#endif  // SELD_FEATURES_HPP_
