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

#ifndef EMOBENCH_FEATURES_FEATURES_HPP
#define EMOBENCH_FEATURES_FEATURES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "emobench/core/bands.hpp"
#include "emobench/core/model.hpp"

namespace emobench::features {

inline constexpr double kMinBandVariance = 1e-12;
inline constexpr double kMinDerivativeSd = 1e-12;
inline constexpr double kRefractorySeconds = 0.2;

/// 0.5 * ln(2 pi e var), in nats. DegenerateVariance below 1e-12.
double differential_entropy_from_variance(double variance);

/// DE of a segment that is already band-limited (no filtering).
double differential_entropy_prebanded(std::span<const double> segment);

/// Zero-phase Butterworth band-pass into `band`, then DE of the 1/N variance.
double differential_entropy(std::span<const double> segment, const BandDef& band, double rate_hz);

/// Skewness of the forward-difference derivative (scaled by rate); 0 when the
/// derivative has (numerically) no spread.
double gsr_derivative_skewness(std::span<const double> segment, double rate_hz);

/// Pan-Tompkins style QRS detector; returns R-peak sample indices.
std::vector<std::size_t> detect_r_peaks(std::span<const double> ecg, double rate_hz);

std::vector<double> rr_intervals(std::span<const std::size_t> peaks, double rate_hz);

/// Root mean square of successive RR differences.
double rmssd(std::span<const double> rr_s);

struct Pulse {
  std::size_t valley = 0;
  std::size_t peak = 0;
  double amplitude = 0.0;  // peak value minus valley value
};

/// Systolic peaks, each paired with the minimum since the preceding peak.
std::vector<Pulse> detect_pulses(std::span<const double> ppg, double rate_hz);

/// (mean PWA of second half - mean PWA of first half) / mean PWA, halves split
/// by peak index at n_samples / 2.
double delta_pwa_from_pulses(std::span<const Pulse> pulses, std::size_t n_samples);
double delta_pwa(std::span<const double> ppg, double rate_hz);

struct FeatureVector {
  std::vector<double> eeg_de;  // channel-major: index = channel * bands + band
  double gsr_skewness = 0.0;
  double ecg_rmssd = 0.0;
  double ppg_delta_pwa = 0.0;
  Emotion label = Emotion::Happiness;
  std::string epoch_id;
  std::string participant_id;
  std::size_t eeg_channels = 0;
  std::size_t bands = 0;

  bool operator==(const FeatureVector&) const = default;
};

std::string epoch_id(const Epoch& epoch);

FeatureVector extract_features(const Epoch& epoch, const std::vector<BandDef>& bands = standard_bands());

/// Column names matching FeatureVector layout (eeg_<channel>_<band>..., then peripherals).
std::vector<std::string> feature_names(const std::vector<std::string>& eeg_channels, const std::vector<BandDef>& bands);

}  // namespace emobench::features

#endif
