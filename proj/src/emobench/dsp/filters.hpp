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

#ifndef EMOBENCH_DSP_FILTERS_HPP
#define EMOBENCH_DSP_FILTERS_HPP

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "emobench/core/model.hpp"

namespace emobench::dsp {

enum class FilterKind { FirBandpass, Notch, ButterworthBandpass, ButterworthLowpass };

std::string_view to_string(FilterKind k) noexcept;

struct FilterSpec {
  FilterKind kind = FilterKind::ButterworthBandpass;
  double low_hz = 0.0;   // band-pass low edge; notch centre; low-pass cutoff
  double high_hz = 0.0;  // band-pass high edge; unused otherwise
  int order = 4;         // Butterworth prototype order
  double transition_hz = 0.25;  // FIR transition width
  double notch_q = 30.0;

  static FilterSpec fir_bandpass(double low_hz, double high_hz, double transition_hz = 0.25);
  static FilterSpec notch(double centre_hz, double q = 30.0);
  static FilterSpec butterworth_bandpass(double low_hz, double high_hz, int order = 4);
  static FilterSpec butterworth_lowpass(double cutoff_hz, int order = 4);

  /// Throws InvalidBand if the spec is not realisable at `rate_hz`.
  void validate(double rate_hz) const;
};

// Second-order section, a0 normalised to 1.
struct Biquad {
  std::array<double, 3> b{1.0, 0.0, 0.0};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};
using Sos = std::vector<Biquad>;

/// Hamming windowed-sinc band-pass, odd length, unit gain at band centre.
std::vector<double> design_fir_bandpass(double low_hz, double high_hz, double rate_hz, double transition_hz);
Sos design_notch(double centre_hz, double q, double rate_hz);
Sos design_butterworth_lowpass(int order, double cutoff_hz, double rate_hz);
Sos design_butterworth_bandpass(int order, double low_hz, double high_hz, double rate_hz);

std::complex<double> freq_response(const Sos& sos, double freq_hz, double rate_hz);
std::complex<double> freq_response(std::span<const double> fir, double freq_hz, double rate_hz);

/// Single-pass causal filtering with direct-form II transposed sections.
std::vector<double> sos_filter(const Sos& sos, std::span<const double> x);

/// Zero-phase (forward-backward) application of an arbitrary filter spec to one channel.
std::vector<double> filter_zero_phase(std::span<const double> x, const FilterSpec& spec, double rate_hz);

/// Applies the filter to every channel of a recording; length and timing are preserved.
Recording apply_filter(const Recording& recording, const FilterSpec& spec);

}  // namespace emobench::dsp

#endif
