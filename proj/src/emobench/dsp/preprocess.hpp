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

#ifndef EMOBENCH_DSP_PREPROCESS_HPP
#define EMOBENCH_DSP_PREPROCESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "emobench/core/model.hpp"
#include "emobench/dsp/channels.hpp"
#include "emobench/dsp/filters.hpp"

namespace emobench::dsp {

// Per-modality preprocessing chain. Defaults follow the acquisition protocol:
// EEG 250 Hz, FIR 0.5-70 Hz, 50 Hz notch, bad-channel repair; ECG Butterworth
// 0.5-40 Hz; GSR Butterworth low-pass 0.5 Hz; PPG Butterworth 0.5-8 Hz.
struct PreprocessConfig {
  std::optional<double> eeg_target_hz = 250.0;
  std::optional<FilterSpec> eeg_bandpass = FilterSpec::fir_bandpass(0.5, 70.0);
  std::optional<FilterSpec> eeg_notch = FilterSpec::notch(50.0);
  bool repair_bad_channels = true;
  std::optional<double> reject_threshold_uv;  // amplitude rejection, off by default
  std::optional<FilterSpec> ecg_filter = FilterSpec::butterworth_bandpass(0.5, 40.0, 4);
  std::optional<FilterSpec> gsr_filter = FilterSpec::butterworth_lowpass(0.5, 4);
  std::optional<FilterSpec> ppg_filter = FilterSpec::butterworth_bandpass(0.5, 8.0, 4);
};

struct TrialPreprocessReport {
  std::string trial_id;
  std::optional<BadChannelReport> bad_channels;
  std::vector<SampleSpan> rejected;  // EEG sample spans at the output rate
};

struct PreprocessedTrial {
  Trial trial;
  TrialPreprocessReport report;
};

PreprocessedTrial preprocess_trial(const Trial& trial, const PreprocessConfig& config,
                                   const Montage& montage = standard_montage_59());

}  // namespace emobench::dsp

#endif
