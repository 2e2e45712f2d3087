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

#ifndef EMOBENCH_SCR_SCR_HPP
#define EMOBENCH_SCR_SCR_HPP

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "emobench/core/model.hpp"

namespace emobench::scr {

inline constexpr double kCandidateAmplitude = 0.01;  // uS
inline constexpr double kValidAmplitude = 0.05;      // uS
inline constexpr double kHysteresis = 0.001;         // uS
inline constexpr double kPostEventHorizon = 2.0;     // s

struct ScrEvent {
  double onset_s = 0.0;  // relative to the first sample of the signal passed in
  double peak_s = 0.0;
  double amplitude_uS = 0.0;
  double rise_time_s = 0.0;
};

/// Trough-to-peak rises inside `window` (seconds from the first sample).
/// Wiggles smaller than the hysteresis do not split a rise.
std::vector<ScrEvent> detect_scr(std::span<const double> gsr, double rate_hz, TimeSpan window,
                                 double hysteresis_uS = kHysteresis);
std::vector<ScrEvent> detect_scr(std::span<const double> gsr, double rate_hz);

/// Largest amplitude among events peaking in (t_event, t_event + horizon]; 0 if none.
/// The trial's GSR recording, channel 0, is used.
double post_event_scr_amplitude(const Trial& trial, const EmotionAnnotation& annotation,
                                double horizon_s = kPostEventHorizon);

/// Percentage of events whose amplitude exceeds the threshold. Outer index is the
/// participant, inner the events of one emotion.
double gsr_increase_percentage(const std::vector<std::vector<double>>& amplitudes_by_participant,
                               double threshold_uS = kValidAmplitude);

struct GroupContrast {
  double high_mean = 0.0;
  double low_mean = 0.0;
};

/// Unweighted means over arousal groups; values indexed by class_index.
GroupContrast arousal_group_contrast(std::span<const double> per_emotion, std::span<const bool> present);
GroupContrast arousal_group_contrast(const std::array<double, kEmotionCount>& per_emotion);

struct EmotionPercentages {
  std::array<double, kEmotionCount> percent{};
  std::array<std::size_t, kEmotionCount> events{};
  std::array<bool, kEmotionCount> present{};
  GroupContrast contrast;
};

/// Per-emotion percentages across every annotation of every trial.
EmotionPercentages gsr_increase_by_emotion(std::span<const Trial> trials, double threshold_uS = kValidAmplitude,
                                           double horizon_s = kPostEventHorizon);

/// Fraction of high-arousal annotations whose centred window holds an SCR of at
/// least `threshold_uS`. Windows leaving the stimulus are skipped.
double scr_concordance(std::span<const Trial> trials, double window_s = 4.0, double threshold_uS = kValidAmplitude);

struct DetectionScore {
  std::size_t injected = 0;
  std::size_t matched = 0;
  double recall = 0.0;  // matched / injected
};

/// One-to-one greedy matching of valid detections (amplitude >= threshold) to
/// known onsets; a detection matches when its onset lies in
/// [onset - tolerance, onset + tolerance].
DetectionScore score_scr_detection(std::span<const ScrEvent> detected, std::span<const double> injected_onsets_s,
                                   double tolerance_s = 1.0, double threshold_uS = kValidAmplitude);

/// Fraction of consecutive `window_s` windows holding at least one valid SCR.
double scr_false_positive_rate(std::span<const double> gsr, double rate_hz, double window_s = 4.0,
                               double threshold_uS = kValidAmplitude);

struct GroupStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample (n - 1)
  double cv = 0.0;  // sd / mean
};

struct LeveneResult {
  double f = 0.0;
  double p = 1.0;
  double df_between = 0.0;
  double df_within = 0.0;
  bool degenerate = false;  // no spread at all: F = 0, p = 1
};

/// Brown-Forsythe variant: one-way ANOVA on |x - group median|.
LeveneResult levene_median(const std::vector<std::vector<double>>& groups);

struct ConsistencyStats {
  GroupStats a;
  GroupStats b;
  LeveneResult levene;
};

/// Ratings on the 1..7 scale; each group needs >= 2 ratings.
ConsistencyStats consistency_stats(std::span<const double> a, std::span<const double> b);
GroupStats group_stats(std::span<const double> ratings);

}  // namespace emobench::scr

#endif
