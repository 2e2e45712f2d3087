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

#ifndef EMOBENCH_SYNTH_SYNTH_HPP
#define EMOBENCH_SYNTH_SYNTH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emobench/core/model.hpp"

namespace emobench::synth {

/// Multiplicative amplitude change of one band in a set of channels during
/// the +/- 2 s around every event of `emotion`.
struct BandEffect {
  Emotion emotion = Emotion::Fear;
  std::string band = "alpha";
  std::string region = "posterior";  // frontal | central | posterior | left | right | all
  std::vector<std::string> channels;  // overrides region when non-empty
  double gain = 1.0;
};

struct ScrPolicy {
  bool high_arousal_only = true;
  double probability = 1.0;  // per eligible event
  double amplitude_min_uS = 0.1;
  double amplitude_max_uS = 0.3;
  double latency_min_s = 0.1;
  double latency_max_s = 0.5;
  double spontaneous_per_min = 0.0;
};

struct SynthSpec {
  std::size_t n_subjects = 20;
  std::size_t trials_per_subject = 6;  // trial i carries emotion i mod 6
  double stimulus_s = 36.0;
  double baseline_s = 10.0;
  std::size_t events_per_trial = 2;
  double event_margin_s = 4.0;   // min distance of events from stimulus edges
  double event_spacing_s = 10.0;  // min distance between events in a trial

  std::size_t eeg_channels = 59;  // first N of the standard montage
  double eeg_rate_hz = 250.0;
  double ecg_rate_hz = 500.0;
  double gsr_rate_hz = 100.0;
  double ppg_rate_hz = 100.0;

  // Background RMS (uV) per band, same order as standard_bands().
  std::array<double, 5> band_rms_uV{8.0, 5.0, 6.0, 3.0, 1.5};
  double posterior_alpha_boost = 1.5;
  double subject_gain_sd = 0.15;  // log-normal per-subject, per-band scale
  double eeg_noise_uV = 0.5;
  double line_noise_uV = 2.0;

  std::vector<BandEffect> effects;
  std::optional<ScrPolicy> scr = ScrPolicy{};

  double gsr_tonic_min_uS = 2.0;
  double gsr_tonic_max_uS = 8.0;
  double gsr_slope_uS_per_s = 0.01;  // tonic decline
  double gsr_noise_uS = 0.001;

  double rr_mean_min_s = 0.75;
  double rr_mean_max_s = 0.95;
  double rr_jitter_s = 0.015;
  // Per-emotion scale of RR successive-difference jitter near events (class index order).
  std::array<double, kEmotionCount> rr_event_scale{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // Per-emotion pulse amplitude slope (fraction per second) near events.
  std::array<double, kEmotionCount> pwa_event_slope{0, 0, 0, 0, 0, 0};
  double pwa_noise = 0.02;
  double ecg_noise_uV = 10.0;
  double ppg_noise = 0.005;

  // Annotation behaviour of the two paradigms.
  double immediate_jitter_s = 0.1;
  double delayed_jitter_s = 1.5;
  double immediate_rating_mean = 6.7;
  double immediate_rating_sd = 0.3;
  double delayed_rating_mean = 5.4;
  double delayed_rating_sd = 1.3;

  std::uint64_t seed = 1;

  /// InvalidSpec on any inconsistent field.
  void validate() const;
};

/// Effects giving each emotion its own event-locked EEG and peripheral signature.
SynthSpec discriminative_spec(std::uint64_t seed = 1);

/// No EEG effects and no SCRs.
SynthSpec null_spec(std::uint64_t seed = 1);

struct EventTruth {
  std::string trial_id;
  std::string participant_id;
  std::size_t index = 0;
  Emotion label = Emotion::Happiness;
  double t_true_s = 0.0;  // stimulus clock
  double t_immediate_s = 0.0;
  double t_delayed_s = 0.0;
  int rating_immediate = 7;
  int rating_delayed = 7;
};

struct InjectedScr {
  std::string trial_id;
  double onset_s = 0.0;  // stimulus clock
  double amplitude_uS = 0.0;
  std::optional<std::size_t> event_index;  // none for spontaneous responses
};

struct InjectedBandEffect {
  std::string trial_id;
  std::size_t event_index = 0;
  Emotion emotion = Emotion::Happiness;
  std::string band;
  std::vector<std::string> channels;
  double gain = 1.0;
  TimeSpan span_s;  // stimulus clock
};

struct GroundTruth {
  std::uint64_t seed = 0;
  std::vector<EventTruth> events;
  std::vector<InjectedScr> scrs;
  std::vector<InjectedBandEffect> band_effects;
  std::vector<std::pair<std::string, std::vector<double>>> rr_series;  // per trial
};

struct SynthCorpus {
  std::vector<Trial> trials;
  GroundTruth truth;
};

/// Deterministic in (spec, seed). Samples are rounded to float32 so they
/// survive the on-disk format unchanged.
SynthCorpus generate_corpus(const SynthSpec& spec);

/// Channel names of a named scalp region within `channels`.
std::vector<std::string> region_channels(const std::string& region, const std::vector<std::string>& channels);

/// Trials carrying the delayed-paradigm annotations instead of the immediate ones.
std::vector<Trial> with_delayed_annotations(const SynthCorpus& corpus);

}  // namespace emobench::synth

#endif
