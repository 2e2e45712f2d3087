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

#include "emobench/synth/waveforms.hpp"

#include <algorithm>
#include <cmath>

namespace emobench::synth {

namespace {

struct Wave {
  double offset_s;
  double amplitude;
  double width_s;
};

// P, Q, R, S, T
constexpr Wave kPqrst[] = {
    {-0.20, 150.0, 0.025}, {-0.035, -100.0, 0.008}, {0.0, 1000.0, 0.010}, {0.035, -250.0, 0.008}, {0.25, 300.0, 0.040}};

double gauss(double t, double width) { return std::exp(-0.5 * (t / width) * (t / width)); }

}  // namespace

double scr_peak_delay(double rise_tau, double decay_tau) {
  return std::log(decay_tau / rise_tau) * rise_tau * decay_tau / (decay_tau - rise_tau);
}

double scr_kernel(double t, double rise_tau, double decay_tau) {
  if (t <= 0.0) return 0.0;
  const double tp = scr_peak_delay(rise_tau, decay_tau);
  const double peak = std::exp(-tp / decay_tau) - std::exp(-tp / rise_tau);
  return (std::exp(-t / decay_tau) - std::exp(-t / rise_tau)) / peak;
}

std::vector<double> ecg_waveform(std::span<const double> beats, double rate, std::size_t n, double scale) {
  std::vector<double> x(n, 0.0);
  for (double b : beats) {
    const auto lo = static_cast<long long>(std::floor((b - 0.4) * rate));
    const auto hi = static_cast<long long>(std::ceil((b + 0.5) * rate));
    for (long long i = std::max(0LL, lo); i <= std::min(static_cast<long long>(n) - 1, hi); ++i) {
      const double t = static_cast<double>(i) / rate - b;
      double v = 0.0;
      for (const auto& w : kPqrst) v += w.amplitude * gauss(t - w.offset_s, w.width_s);
      x[static_cast<std::size_t>(i)] += scale * v;
    }
  }
  return x;
}

std::vector<double> ppg_waveform(std::span<const double> beats, std::span<const double> amplitudes, double rate,
                                 std::size_t n, double transit_s) {
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < beats.size(); ++k) {
    const double foot = beats[k] + transit_s;
    const double a = k < amplitudes.size() ? amplitudes[k] : 1.0;
    const auto lo = static_cast<long long>(std::floor((foot - 0.3) * rate));
    const auto hi = static_cast<long long>(std::ceil((foot + 1.0) * rate));
    for (long long i = std::max(0LL, lo); i <= std::min(static_cast<long long>(n) - 1, hi); ++i) {
      const double t = static_cast<double>(i) / rate - foot;
      x[static_cast<std::size_t>(i)] += a * (gauss(t - 0.15, 0.07) + 0.35 * gauss(t - 0.40, 0.08));
    }
  }
  return x;
}

std::vector<double> beats_from_rr(double first_beat_s, std::span<const double> rr_s) {
  std::vector<double> beats{first_beat_s};
  for (double rr : rr_s) beats.push_back(beats.back() + rr);
  return beats;
}

}  // namespace emobench::synth
