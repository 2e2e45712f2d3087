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

#ifndef EMOBENCH_CORE_MODEL_HPP
#define EMOBENCH_CORE_MODEL_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emobench {

enum class Modality { EEG, ECG, GSR, PPG };
inline constexpr std::array<Modality, 4> kAllModalities{Modality::EEG, Modality::ECG, Modality::GSR,
                                                        Modality::PPG};

// Enumerators are declared in lexicographic order of their names, so the
// underlying value doubles as the class index used by the classifiers.
enum class Emotion { Anger, Disgust, Fear, Happiness, Sadness, Surprise };
inline constexpr std::size_t kEmotionCount = 6;
inline constexpr std::array<Emotion, kEmotionCount> kAllEmotions{
    Emotion::Anger, Emotion::Disgust, Emotion::Fear, Emotion::Happiness, Emotion::Sadness, Emotion::Surprise};

enum class Intensity { Low, Medium, High };
inline constexpr std::array<Intensity, 3> kAllIntensities{Intensity::Low, Intensity::Medium, Intensity::High};

std::string_view to_string(Modality m) noexcept;
std::string_view to_string(Emotion e) noexcept;
std::string_view to_string(Intensity i) noexcept;
std::optional<Modality> parse_modality(std::string_view s) noexcept;
std::optional<Emotion> parse_emotion(std::string_view s) noexcept;
std::optional<Intensity> parse_intensity(std::string_view s) noexcept;

constexpr std::size_t class_index(Emotion e) noexcept { return static_cast<std::size_t>(e); }

// High arousal: Fear, Surprise, Happiness, Anger. Low: Sadness, Disgust.
bool is_high_arousal(Emotion e) noexcept;

/// Half-open interval [start_s, end_s) in seconds.
struct TimeSpan {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const noexcept { return end_s - start_s; }
  bool operator==(const TimeSpan&) const = default;
};

/// Round to nearest integer, ties to even.
long long round_half_even(double x) noexcept;

/// One modality's multichannel signal. Samples are stored channel-major.
class Recording {
 public:
  Recording() = default;
  Recording(Modality modality, std::vector<std::string> channel_names, double sample_rate_hz,
            std::vector<double> samples, double start_time_s = 0.0, std::string units = {});

  Modality modality() const noexcept { return modality_; }
  const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double start_time_s() const noexcept { return start_time_s_; }
  const std::string& units() const noexcept { return units_; }

  std::size_t channel_count() const noexcept { return channel_names_.size(); }
  std::size_t sample_count() const noexcept {
    return channel_names_.empty() ? 0 : samples_.size() / channel_names_.size();
  }
  double duration_s() const noexcept { return static_cast<double>(sample_count()) / sample_rate_hz_; }

  std::span<const double> channel(std::size_t c) const;
  std::span<double> channel(std::size_t c);
  const std::vector<double>& samples() const noexcept { return samples_; }

  /// Copy with replaced samples (same channel layout, possibly different length/rate).
  Recording with_samples(std::vector<double> samples, std::optional<double> sample_rate_hz = std::nullopt) const;

  /// Copy of samples [first, first + count) on every channel.
  Recording slice(std::size_t first, std::size_t count) const;

  bool all_finite() const noexcept;

 private:
  Modality modality_ = Modality::EEG;
  std::vector<std::string> channel_names_;
  double sample_rate_hz_ = 1.0;
  std::vector<double> samples_;
  double start_time_s_ = 0.0;
  std::string units_;
};

std::string_view default_units(Modality m) noexcept;

struct EmotionAnnotation {
  double t_event_s = 0.0;  // seconds from stimulus onset
  Emotion label = Emotion::Happiness;
  Intensity intensity = Intensity::Medium;
  std::string session_id;
  std::string participant_id;

  bool operator==(const EmotionAnnotation&) const = default;
};

struct Trial {
  std::string trial_id;
  std::string participant_id;
  std::string session_id;
  std::string stimulus_id;
  std::optional<TimeSpan> baseline_span_s;  // session clock
  TimeSpan stimulus_span_s;                 // session clock
  std::vector<Recording> recordings;
  std::vector<EmotionAnnotation> annotations;

  double stimulus_duration_s() const noexcept { return stimulus_span_s.duration(); }
  const Recording* find(Modality m) const noexcept;
  Recording* find(Modality m) noexcept;

  /// Throws InvalidArgument when spans overlap or annotations fall outside the stimulus.
  void validate() const;
};

struct EpochProvenance {
  std::string trial_id;
  std::string participant_id;
  double shift_offset_s = 0.0;
};

struct Epoch {
  EmotionAnnotation annotation;
  TimeSpan window_span_s;  // stimulus clock
  std::vector<Recording> blocks;
  EpochProvenance provenance;

  const Recording* find(Modality m) const noexcept;
};

struct EpochOptions {
  double half_width_s = 2.0;
  // Window centre = t_event + shift_s.
  double shift_s = 0.0;
  // Empty means every modality present in the trial.
  std::vector<Modality> modalities;
};

Epoch extract_epoch(const Trial& trial, const EmotionAnnotation& annotation, const EpochOptions& options = {});

/// Window of arbitrary placement on the stimulus clock; label comes from `annotation`.
Epoch extract_window(const Trial& trial, const EmotionAnnotation& annotation, TimeSpan window_stimulus_s,
                     std::span<const Modality> modalities = {});

std::vector<Recording> extract_baseline(const Trial& trial);

}  // namespace emobench

#endif
