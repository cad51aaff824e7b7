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

#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "seld/error.hpp"

namespace seld::internal {

RealFft::RealFft(int n) : n_(n) {
  if (n < 1) throw ValidationError("FFT size must be positive");
  double* real = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
  forward_plan_ = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(real);
  fftw_free(spec);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) throw Error("FFTW plan creation failed");
}

RealFft::~RealFft() {
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const RealFft& RealFft::for_size(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot.reset(new RealFft(n));
  return *slot;
}

void RealFft::forward(double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in,
                       reinterpret_cast<fftw_complex*>(out));
}

void RealFft::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace seld::internal
