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

#include "emobench/core/model.hpp"

#include <algorithm>
#include <cmath>

#include "emobench/core/error.hpp"

namespace emobench {

namespace {
constexpr double kTimeTolerance = 1e-9;
}

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidBand: return "InvalidBand";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::UpsamplingNotSupported: return "UpsamplingNotSupported";
    case Errc::IrrationalRatio: return "IrrationalRatio";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::WindowOutOfBounds: return "WindowOutOfBounds";
    case Errc::MissingModality: return "MissingModality";
    case Errc::MissingBaseline: return "MissingBaseline";
    case Errc::MissingMontage: return "MissingMontage";
    case Errc::MissingFeature: return "MissingFeature";
    case Errc::MissingEmotion: return "MissingEmotion";
    case Errc::TooFewChannels: return "TooFewChannels";
    case Errc::AllChannelsBad: return "AllChannelsBad";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::MalformedManifest: return "MalformedManifest";
    case Errc::UnlabeledTrial: return "UnlabeledTrial";
    case Errc::Io: return "Io";
    case Errc::DegenerateVariance: return "DegenerateVariance";
    case Errc::DegenerateGroup: return "DegenerateGroup";
    case Errc::NoPeaksFound: return "NoPeaksFound";
    case Errc::TooFewIntervals: return "TooFewIntervals";
    case Errc::InsufficientPulses: return "InsufficientPulses";
    case Errc::SegmentTooShort: return "SegmentTooShort";
    case Errc::TooFewSubjects: return "TooFewSubjects";
    case Errc::EmptyAdjacency: return "EmptyAdjacency";
    case Errc::EmptyEventSet: return "EmptyEventSet";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
  }
  return "Unknown";
}

ErrorCategory errc_category(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:
    case Errc::InvalidBand:
    case Errc::InvalidSpec:
    case Errc::UpsamplingNotSupported:
    case Errc::IrrationalRatio:
    case Errc::DimensionMismatch:
    case Errc::ShapeMismatch:
      return ErrorCategory::Usage;
    case Errc::WindowOutOfBounds:
    case Errc::MissingModality:
    case Errc::MissingBaseline:
    case Errc::MissingMontage:
    case Errc::MissingFeature:
    case Errc::MissingEmotion:
    case Errc::TooFewChannels:
    case Errc::AllChannelsBad:
    case Errc::ChecksumMismatch:
    case Errc::UnsupportedVersion:
    case Errc::MalformedManifest:
    case Errc::UnlabeledTrial:
    case Errc::Io:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Analysis;
  }
}

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::EEG: return "EEG";
    case Modality::ECG: return "ECG";
    case Modality::GSR: return "GSR";
    case Modality::PPG: return "PPG";
  }
  return "?";
}

std::string_view to_string(Emotion e) noexcept {
  switch (e) {
    case Emotion::Anger: return "Anger";
    case Emotion::Disgust: return "Disgust";
    case Emotion::Fear: return "Fear";
    case Emotion::Happiness: return "Happiness";
    case Emotion::Sadness: return "Sadness";
    case Emotion::Surprise: return "Surprise";
  }
  return "?";
}

std::string_view to_string(Intensity i) noexcept {
  switch (i) {
    case Intensity::Low: return "Low";
    case Intensity::Medium: return "Medium";
    case Intensity::High: return "High";
  }
  return "?";
}

std::optional<Modality> parse_modality(std::string_view s) noexcept {
  for (auto m : kAllModalities)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<Emotion> parse_emotion(std::string_view s) noexcept {
  for (auto e : kAllEmotions)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

std::optional<Intensity> parse_intensity(std::string_view s) noexcept {
  for (auto i : kAllIntensities)
    if (to_string(i) == s) return i;
  return std::nullopt;
}

bool is_high_arousal(Emotion e) noexcept {
  return e == Emotion::Fear || e == Emotion::Surprise || e == Emotion::Happiness || e == Emotion::Anger;
}

std::string_view default_units(Modality m) noexcept {
  switch (m) {
    case Modality::EEG:
    case Modality::ECG: return "uV";
    case Modality::GSR: return "uS";
    case Modality::PPG: return "au";
  }
  return "";
}

long long round_half_even(double x) noexcept { return static_cast<long long>(std::nearbyint(x)); }

Recording::Recording(Modality modality, std::vector<std::string> channel_names, double sample_rate_hz,
                     std::vector<double> samples, double start_time_s, std::string units)
    : modality_(modality),
      channel_names_(std::move(channel_names)),
      sample_rate_hz_(sample_rate_hz),
      samples_(std::move(samples)),
      start_time_s_(start_time_s),
      units_(units.empty() ? std::string(default_units(modality)) : std::move(units)) {
  if (channel_names_.empty()) fail(Errc::InvalidArgument, "recording needs at least one channel");
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    fail(Errc::InvalidArgument, "sample rate must be positive");
  if (samples_.size() % channel_names_.size() != 0)
    fail(Errc::InvalidArgument, "channels must have equal length");
}

std::span<const double> Recording::channel(std::size_t c) const {
  if (c >= channel_count()) fail(Errc::InvalidArgument, "channel index out of range");
  const std::size_t n = sample_count();
  return {samples_.data() + c * n, n};
}

std::span<double> Recording::channel(std::size_t c) {
  if (c >= channel_count()) fail(Errc::InvalidArgument, "channel index out of range");
  const std::size_t n = sample_count();
  return {samples_.data() + c * n, n};
}

Recording Recording::with_samples(std::vector<double> samples, std::optional<double> sample_rate_hz) const {
  return Recording(modality_, channel_names_, sample_rate_hz.value_or(sample_rate_hz_), std::move(samples),
                   start_time_s_, units_);
}

Recording Recording::slice(std::size_t first, std::size_t count) const {
  const std::size_t n = sample_count();
  if (first + count > n) fail(Errc::WindowOutOfBounds, "slice exceeds recording length");
  std::vector<double> out;
  out.reserve(count * channel_count());
  for (std::size_t c = 0; c < channel_count(); ++c) {
    auto ch = channel(c);
    out.insert(out.end(), ch.begin() + static_cast<std::ptrdiff_t>(first),
               ch.begin() + static_cast<std::ptrdiff_t>(first + count));
  }
  return Recording(modality_, channel_names_, sample_rate_hz_, std::move(out),
                   start_time_s_ + static_cast<double>(first) / sample_rate_hz_, units_);
}

bool Recording::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

const Recording* Trial::find(Modality m) const noexcept {
  for (const auto& r : recordings)
    if (r.modality() == m) return &r;
  return nullptr;
}

Recording* Trial::find(Modality m) noexcept {
  for (auto& r : recordings)
    if (r.modality() == m) return &r;
  return nullptr;
}

void Trial::validate() const {
  if (stimulus_span_s.duration() <= 0.0) fail(Errc::InvalidArgument, trial_id + ": empty stimulus span");
  if (baseline_span_s) {
    if (baseline_span_s->duration() <= 0.0) fail(Errc::InvalidArgument, trial_id + ": empty baseline span");
    if (baseline_span_s->end_s > stimulus_span_s.start_s + kTimeTolerance)
      fail(Errc::InvalidArgument, trial_id + ": baseline must precede the stimulus");
  }
  for (const auto& a : annotations) {
    if (a.t_event_s < -kTimeTolerance || a.t_event_s > stimulus_duration_s() + kTimeTolerance)
      fail(Errc::InvalidArgument, trial_id + ": annotation outside stimulus span");
  }
}

const Recording* Epoch::find(Modality m) const noexcept {
  for (const auto& r : blocks)
    if (r.modality() == m) return &r;
  return nullptr;
}

namespace {

Recording cut(const Recording& rec, double session_start_s, double duration_s) {
  const double rate = rec.sample_rate_hz();
  const long long first = round_half_even((session_start_s - rec.start_time_s()) * rate);
  const long long count = round_half_even(duration_s * rate);
  if (first < 0 || count <= 0 || first + count > static_cast<long long>(rec.sample_count()))
    fail(Errc::WindowOutOfBounds, std::string(to_string(rec.modality())) + " recording does not cover the window");
  return rec.slice(static_cast<std::size_t>(first), static_cast<std::size_t>(count));
}

std::vector<Modality> resolve_modalities(const Trial& trial, std::span<const Modality> requested) {
  std::vector<Modality> out;
  if (requested.empty()) {
    for (const auto& r : trial.recordings) out.push_back(r.modality());
    return out;
  }
  for (auto m : requested) {
    if (!trial.find(m))
      fail(Errc::MissingModality, trial.trial_id + " has no " + std::string(to_string(m)) + " recording");
    out.push_back(m);
  }
  return out;
}

}  // namespace

Epoch extract_window(const Trial& trial, const EmotionAnnotation& annotation, TimeSpan window,
                     std::span<const Modality> modalities) {
  if (window.start_s < -kTimeTolerance || window.end_s > trial.stimulus_duration_s() + kTimeTolerance)
    fail(Errc::WindowOutOfBounds, trial.trial_id + ": window crosses the stimulus span");
  const auto selected = resolve_modalities(trial, modalities);
  Epoch epoch;
  epoch.annotation = annotation;
  epoch.window_span_s = window;
  epoch.provenance.trial_id = trial.trial_id;
  epoch.provenance.participant_id = trial.participant_id;
  for (auto m : selected)
    epoch.blocks.push_back(cut(*trial.find(m), trial.stimulus_span_s.start_s + window.start_s, window.duration()));
  return epoch;
}

Epoch extract_epoch(const Trial& trial, const EmotionAnnotation& annotation, const EpochOptions& options) {
  if (!(options.half_width_s > 0.0)) fail(Errc::InvalidArgument, "half width must be positive");
  const double centre = annotation.t_event_s + options.shift_s;
  Epoch e = extract_window(trial, annotation, {centre - options.half_width_s, centre + options.half_width_s},
                           options.modalities);
  e.provenance.shift_offset_s = options.shift_s;
  return e;
}

std::vector<Recording> extract_baseline(const Trial& trial) {
  if (!trial.baseline_span_s) fail(Errc::MissingBaseline, trial.trial_id + " has no baseline span");
  std::vector<Recording> out;
  for (const auto& r : trial.recordings)
    out.push_back(cut(r, trial.baseline_span_s->start_s, trial.baseline_span_s->duration()));
  return out;
}

}  // namespace emobench
