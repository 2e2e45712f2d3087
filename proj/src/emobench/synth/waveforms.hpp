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

#ifndef EMOBENCH_SYNTH_WAVEFORMS_HPP
#define EMOBENCH_SYNTH_WAVEFORMS_HPP

#include <span>
#include <vector>

namespace emobench::synth {

inline constexpr double kScrRiseTau = 0.75;
inline constexpr double kScrDecayTau = 2.0;

/// Bi-exponential SCR shape, normalised to unit peak; zero before onset.
double scr_kernel(double t_since_onset_s, double rise_tau = kScrRiseTau, double decay_tau = kScrDecayTau);
double scr_peak_delay(double rise_tau = kScrRiseTau, double decay_tau = kScrDecayTau);

/// Stylised PQRST train in microvolts; the R wave (1000 uV * scale) peaks at each beat time.
std::vector<double> ecg_waveform(std::span<const double> beat_times_s, double rate_hz, std::size_t n_samples,
                                 double scale = 1.0);

/// Pulse train; pulse i has systolic height amplitudes[i] above its foot.
/// The systolic peak follows the beat by `transit_s` + 0.15 s.
std::vector<double> ppg_waveform(std::span<const double> beat_times_s, std::span<const double> amplitudes,
                                 double rate_hz, std::size_t n_samples, double transit_s = 0.15);

/// Beat times from an RR series starting at `first_beat_s`.
std::vector<double> beats_from_rr(double first_beat_s, std::span<const double> rr_s);

}  // namespace emobench::synth

#endif
