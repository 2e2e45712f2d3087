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

// Shared builders for unit tests.
#pragma once

#include <filesystem>
#include <string>
#include <unistd.h>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "emobench/core/model.hpp"

namespace fixtures {

using namespace emobench;

// Channel c sample k holds c * 1e6 + k, making index arithmetic checkable.
inline Recording ramp_recording(Modality m, std::size_t channels, double rate, double seconds) {
  const auto n = static_cast<std::size_t>(std::llround(rate * seconds));
  std::vector<std::string> names;
  std::vector<double> s;
  for (std::size_t c = 0; c < channels; ++c) {
    names.push_back(std::string(to_string(m)) + std::to_string(c));
    for (std::size_t k = 0; k < n; ++k) s.push_back(static_cast<double>(c) * 1e6 + static_cast<double>(k));
  }
  return Recording(m, names, rate, s);
}

// 10 s baseline then a stimulus of `stimulus_s` seconds; rates EEG 250, ECG 1000, GSR 100, PPG 50.
inline Trial ramp_trial(double stimulus_s = 60.0, bool with_baseline = true) {
  Trial t;
  t.trial_id = "t0";
  t.participant_id = "p0";
  t.session_id = "s0";
  t.stimulus_id = "v0";
  const double base = with_baseline ? 10.0 : 0.0;
  if (with_baseline) t.baseline_span_s = TimeSpan{0.0, 10.0};
  t.stimulus_span_s = {base, base + stimulus_s};
  t.recordings.push_back(ramp_recording(Modality::EEG, 4, 250.0, base + stimulus_s));
  t.recordings.push_back(ramp_recording(Modality::ECG, 3, 1000.0, base + stimulus_s));
  t.recordings.push_back(ramp_recording(Modality::GSR, 2, 100.0, base + stimulus_s));
  t.recordings.push_back(ramp_recording(Modality::PPG, 1, 50.0, base + stimulus_s));
  return t;
}

inline std::vector<double> sine(double freq, double rate, std::size_t n, double amp = 1.0, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate + phase);
  return x;
}

inline double rms(const std::vector<double>& x, std::size_t first, std::size_t last) {
  double s = 0.0;
  for (std::size_t i = first; i < last; ++i) s += x[i] * x[i];
  return std::sqrt(s / static_cast<double>(last - first));
}

inline std::vector<double> gaussian_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = nd(rng);
  return x;
}

// Fresh, empty scratch directory unique to this process.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("emobench-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace fixtures
