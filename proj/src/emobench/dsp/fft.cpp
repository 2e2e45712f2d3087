/*
  Copyright 2026 The emobench Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#include "emobench/dsp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "emobench/core/error.hpp"

namespace emobench::dsp {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) fail(Errc::InvalidArgument, "FFT length must be positive");
  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(n);
  auto* spec = fftw_alloc_complex(n / 2 + 1);
  spectrum_ = spec;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_r2c_1d(len, real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(real_);
  fftw_free(spectrum_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != bins()) fail(Errc::InvalidArgument, "FFT buffer size mismatch");
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::memcpy(out.data(), spectrum_, bins() * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != bins() || out.size() != n_) fail(Errc::InvalidArgument, "FFT buffer size mismatch");
  std::memcpy(spectrum_, in.data(), bins() * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy(real_, real_ + n_, out.begin());
}

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> convolve_causal(std::span<const double> x, std::span<const double> h) {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty() || h.empty()) return y;
  // Short kernels are cheaper directly.
  if (h.size() <= 64) {
    for (std::size_t n = 0; n < x.size(); ++n) {
      double acc = 0.0;
      const std::size_t kmax = std::min(h.size(), n + 1);
      for (std::size_t k = 0; k < kmax; ++k) acc += h[k] * x[n - k];
      y[n] = acc;
    }
    return y;
  }
  const std::size_t nfft = next_pow2(x.size() + h.size() - 1);
  RealFft fft(nfft);
  std::vector<double> buf(nfft, 0.0);
  std::vector<std::complex<double>> X(fft.bins()), H(fft.bins());
  std::copy(x.begin(), x.end(), buf.begin());
  fft.forward(buf, X);
  std::fill(buf.begin(), buf.end(), 0.0);
  std::copy(h.begin(), h.end(), buf.begin());
  fft.forward(buf, H);
  for (std::size_t i = 0; i < X.size(); ++i) X[i] *= H[i];
  fft.inverse(X, buf);
  const double scale = 1.0 / static_cast<double>(nfft);
  for (std::size_t n = 0; n < y.size(); ++n) y[n] = buf[n] * scale;
  return y;
}

}  // namespace emobench::dsp
