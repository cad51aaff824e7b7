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

#ifndef SELD_SRC_FFT_HPP_
#define SELD_SRC_FFT_HPP_

#include <complex>

namespace seld::internal {

// Real-input FFT of a fixed size backed by FFTW. Plans are created once per
// size and shared; execution is reentrant.
class RealFft {
 public:
  static const RealFft& for_size(int n);

  int size() const { return n_; }
  // n real samples -> n/2+1 bins, unnormalized.
  void forward(double* in, std::complex<double>* out) const;
  // n/2+1 bins -> n real samples, unnormalized (scaled by n). Clobbers `in`.
  void inverse(std::complex<double>* in, double* out) const;

  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

 private:
  explicit RealFft(int n);
  int n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace seld::internal

#endif  // SELD_SRC_FFT_HPP_
