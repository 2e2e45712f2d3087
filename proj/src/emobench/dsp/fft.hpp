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

#ifndef EMOBENCH_DSP_FFT_HPP
#define EMOBENCH_DSP_FFT_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace emobench::dsp {

// Real-to-complex FFT of fixed length, backed by FFTW. Not copyable; one
// instance must not be used from two threads at once.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  // in.size() == size(), out.size() == bins()
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // Unnormalised inverse: inverse(forward(x)) == n * x.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n) noexcept;

/// Causal linear convolution truncated to the input length:
/// y[n] = sum_k h[k] x[n-k], n in [0, x.size()).
std::vector<double> convolve_causal(std::span<const double> x, std::span<const double> h);

}  // namespace emobench::dsp

#endif
