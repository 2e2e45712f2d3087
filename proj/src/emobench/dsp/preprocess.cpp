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

#include "emobench/dsp/preprocess.hpp"

#include "emobench/core/error.hpp"
#include "emobench/dsp/resample.hpp"

namespace emobench::dsp {

PreprocessedTrial preprocess_trial(const Trial& trial, const PreprocessConfig& config, const Montage& montage) {
  PreprocessedTrial out;
  out.trial = trial;
  out.report.trial_id = trial.trial_id;
  for (auto& rec : out.trial.recordings) {
    switch (rec.modality()) {
      case Modality::EEG: {
        if (config.eeg_target_hz && *config.eeg_target_hz < rec.sample_rate_hz())
          rec = resample(rec, *config.eeg_target_hz);
        if (config.eeg_bandpass) rec = apply_filter(rec, *config.eeg_bandpass);
        if (config.eeg_notch) rec = apply_filter(rec, *config.eeg_notch);
        if (config.repair_bad_channels && rec.channel_count() >= 3) {
          auto report = detect_bad_channels(rec);
          if (!report.flagged.empty()) rec = repair_channels(rec, report, montage);
          out.report.bad_channels = std::move(report);
        }
        if (config.reject_threshold_uv) out.report.rejected = amplitude_reject(rec, *config.reject_threshold_uv);
        break;
      }
      case Modality::ECG:
        if (config.ecg_filter) rec = apply_filter(rec, *config.ecg_filter);
        break;
      case Modality::GSR:
        if (config.gsr_filter) rec = apply_filter(rec, *config.gsr_filter);
        break;
      case Modality::PPG:
        if (config.ppg_filter) rec = apply_filter(rec, *config.ppg_filter);
        break;
    }
    if (!rec.all_finite())
      fail(Errc::InvalidArgument, trial.trial_id + ": non-finite samples after preprocessing " +
                                      std::string(to_string(rec.modality())));
  }
  return out;
}

}  // namespace emobench::dsp
