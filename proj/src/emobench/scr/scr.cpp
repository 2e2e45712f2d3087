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

#include "emobench/scr/scr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/math/distributions/fisher_f.hpp>

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"

namespace emobench::scr {

std::vector<ScrEvent> detect_scr(std::span<const double> gsr, double rate_hz, TimeSpan window, double hysteresis) {
  std::vector<ScrEvent> out;
  if (gsr.size() < 2) return out;
  const auto last = static_cast<long long>(gsr.size()) - 1;
  const auto a = std::clamp(static_cast<long long>(std::ceil(window.start_s * rate_hz - 1e-9)), 0LL, last);
  const auto b = std::clamp(static_cast<long long>(std::floor(window.end_s * rate_hz + 1e-9)), 0LL, last);
  if (b <= a) return out;

  auto emit = [&](long long trough, long long peak) {
    const double amp = gsr[peak] - gsr[trough];
    if (amp < kCandidateAmplitude) return;
    const double onset = static_cast<double>(trough) / rate_hz;
    const double top = static_cast<double>(peak) / rate_hz;
    out.push_back({onset, top, amp, top - onset});
  };

  long long trough = a, peak = a;
  bool rising = false;
  for (long long i = a + 1; i <= b; ++i) {
    const double v = gsr[i];
    if (!rising) {
      if (v < gsr[trough]) {
        trough = i;
      } else if (v - gsr[trough] > hysteresis) {
        rising = true;
        peak = i;
      }
    } else if (v >= gsr[peak]) {
      peak = i;
    } else if (gsr[peak] - v > hysteresis) {
      emit(trough, peak);
      rising = false;
      trough = i;
    }
  }
  if (rising) emit(trough, peak);
  return out;
}

std::vector<ScrEvent> detect_scr(std::span<const double> gsr, double rate_hz) {
  return detect_scr(gsr, rate_hz, {0.0, static_cast<double>(gsr.size()) / rate_hz});
}

double post_event_scr_amplitude(const Trial& trial, const EmotionAnnotation& annotation, double horizon_s) {
  const auto* rec = trial.find(Modality::GSR);
  if (!rec) fail(Errc::MissingModality, trial.trial_id + ": no GSR recording");
  const double t0 = trial.stimulus_span_s.start_s + annotation.t_event_s - rec->start_time_s();
  const double t1 = std::min(t0 + horizon_s, trial.stimulus_span_s.end_s - rec->start_time_s());
  if (t0 < 0.0 || t0 > rec->duration_s()) fail(Errc::WindowOutOfBounds, trial.trial_id + ": event outside GSR record");
  double best = 0.0;
  for (const auto& e : detect_scr(rec->channel(0), rec->sample_rate_hz(), {t0, t1}))
    if (e.peak_s > t0 + 1e-9) best = std::max(best, e.amplitude_uS);
  return best;
}

double gsr_increase_percentage(const std::vector<std::vector<double>>& by_participant, double threshold) {
  std::size_t total = 0, hits = 0;
  for (const auto& events : by_participant)
    for (double a : events) {
      ++total;
      if (a > threshold) ++hits;
    }
  if (total == 0) fail(Errc::EmptyEventSet, "no events to score");
  return 100.0 * static_cast<double>(hits) / static_cast<double>(total);
}

GroupContrast arousal_group_contrast(std::span<const double> per_emotion, std::span<const bool> present) {
  if (per_emotion.size() != kEmotionCount || present.size() != kEmotionCount)
    fail(Errc::DimensionMismatch, "expected one value per emotion");
  double hi = 0.0, lo = 0.0;
  int n_hi = 0, n_lo = 0;
  for (auto e : kAllEmotions) {
    const auto k = class_index(e);
    if (!present[k]) fail(Errc::MissingEmotion, std::string(to_string(e)) + " has no events");
    if (is_high_arousal(e)) {
      hi += per_emotion[k];
      ++n_hi;
    } else {
      lo += per_emotion[k];
      ++n_lo;
    }
  }
  return {hi / n_hi, lo / n_lo};
}

GroupContrast arousal_group_contrast(const std::array<double, kEmotionCount>& per_emotion) {
  std::array<bool, kEmotionCount> all{};
  all.fill(true);
  return arousal_group_contrast(per_emotion, all);
}

EmotionPercentages gsr_increase_by_emotion(std::span<const Trial> trials, double threshold, double horizon_s) {
  // emotion -> participant -> amplitudes
  std::array<std::map<std::string, std::vector<double>>, kEmotionCount> table;
  for (const auto& t : trials)
    for (const auto& a : t.annotations)
      table[class_index(a.label)][t.participant_id].push_back(post_event_scr_amplitude(t, a, horizon_s));

  EmotionPercentages out;
  for (auto e : kAllEmotions) {
    const auto k = class_index(e);
    std::vector<std::vector<double>> rows;
    for (auto& [pid, amps] : table[k]) {
      out.events[k] += amps.size();
      rows.push_back(std::move(amps));
    }
    out.present[k] = out.events[k] > 0;
    if (out.present[k]) out.percent[k] = gsr_increase_percentage(rows, threshold);
  }
  if (std::all_of(out.present.begin(), out.present.end(), [](bool p) { return p; }))
    out.contrast = arousal_group_contrast(out.percent);
  return out;
}

double scr_concordance(std::span<const Trial> trials, double window_s, double threshold) {
  std::size_t total = 0, hits = 0;
  for (const auto& t : trials) {
    const auto* rec = t.find(Modality::GSR);
    for (const auto& a : t.annotations) {
      if (!is_high_arousal(a.label)) continue;
      const double lo = a.t_event_s - window_s / 2.0, hi = a.t_event_s + window_s / 2.0;
      if (lo < -1e-9 || hi > t.stimulus_duration_s() + 1e-9) continue;
      if (!rec) fail(Errc::MissingModality, t.trial_id + ": no GSR recording");
      const double off = t.stimulus_span_s.start_s - rec->start_time_s();
      ++total;
      const auto events = detect_scr(rec->channel(0), rec->sample_rate_hz(), {off + lo, off + hi});
      if (std::any_of(events.begin(), events.end(), [&](const ScrEvent& e) { return e.amplitude_uS >= threshold; }))
        ++hits;
    }
  }
  if (total == 0) fail(Errc::EmptyEventSet, "no high-arousal annotations with a full window");
  return static_cast<double>(hits) / static_cast<double>(total);
}

GroupStats group_stats(std::span<const double> r) {
  if (r.size() < 2) fail(Errc::InsufficientData, "a rating group needs >= 2 values");
  for (double v : r)
    if (!(v >= 1.0 && v <= 7.0)) fail(Errc::InvalidArgument, "rating " + std::to_string(v) + " outside 1..7");
  GroupStats g;
  g.n = r.size();
  g.mean = stats::mean(r);
  g.sd = stats::sd_sample(r);
  g.cv = g.sd / g.mean;
  return g;
}

LeveneResult levene_median(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) fail(Errc::InvalidArgument, "Levene's test needs >= 2 groups");
  std::vector<std::vector<double>> z(groups.size());
  std::size_t n_total = 0;
  double grand = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) fail(Errc::InsufficientData, "each group needs >= 2 values");
    const double med = stats::median(groups[g]);
    for (double v : groups[g]) {
      z[g].push_back(std::abs(v - med));
      grand += z[g].back();
    }
    n_total += groups[g].size();
  }
  grand /= static_cast<double>(n_total);
  double between = 0.0, within = 0.0;
  for (const auto& zg : z) {
    const double m = stats::mean(zg);
    between += static_cast<double>(zg.size()) * (m - grand) * (m - grand);
    for (double v : zg) within += (v - m) * (v - m);
  }
  LeveneResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(n_total - groups.size());
  const double scale = std::max(1.0, grand);
  if (within <= 1e-24 * scale * scale) {
    if (between <= 1e-24 * scale * scale) {
      r.degenerate = true;
      return r;
    }
    r.f = std::numeric_limits<double>::infinity();
    r.p = 0.0;
    return r;
  }
  r.f = (between / r.df_between) / (within / r.df_within);
  boost::math::fisher_f dist(r.df_between, r.df_within);
  r.p = std::clamp(boost::math::cdf(boost::math::complement(dist, r.f)), 0.0, 1.0);
  return r;
}

ConsistencyStats consistency_stats(std::span<const double> a, std::span<const double> b) {
  ConsistencyStats s;
  s.a = group_stats(a);
  s.b = group_stats(b);
  s.levene = levene_median({{a.begin(), a.end()}, {b.begin(), b.end()}});
  return s;
}

DetectionScore score_scr_detection(std::span<const ScrEvent> detected, std::span<const double> injected_onsets_s,
                                   double tolerance_s, double threshold_uS) {
  DetectionScore s;
  s.injected = injected_onsets_s.size();
  std::vector<double> onsets(injected_onsets_s.begin(), injected_onsets_s.end());
  std::sort(onsets.begin(), onsets.end());
  std::vector<bool> used(detected.size(), false);
  for (double t : onsets) {
    std::size_t best = detected.size();
    double best_d = tolerance_s;
    for (std::size_t k = 0; k < detected.size(); ++k) {
      if (used[k] || detected[k].amplitude_uS < threshold_uS) continue;
      const double d = std::abs(detected[k].onset_s - t);
      if (d <= best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best < detected.size()) {
      used[best] = true;
      ++s.matched;
    }
  }
  s.recall = s.injected ? static_cast<double>(s.matched) / static_cast<double>(s.injected) : 1.0;
  return s;
}

double scr_false_positive_rate(std::span<const double> gsr, double rate_hz, double window_s, double threshold_uS) {
  if (!(window_s > 0.0)) fail(Errc::InvalidArgument, "window must be positive");
  const double total = static_cast<double>(gsr.size()) / rate_hz;
  const auto windows = static_cast<std::size_t>(std::floor(total / window_s + 1e-9));
  if (windows == 0) fail(Errc::SegmentTooShort, "signal shorter than one window");
  std::size_t hits = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const TimeSpan span{static_cast<double>(w) * window_s, static_cast<double>(w + 1) * window_s};
    const auto ev = detect_scr(gsr, rate_hz, span);
    if (std::any_of(ev.begin(), ev.end(), [&](const ScrEvent& e) { return e.amplitude_uS >= threshold_uS; })) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(windows);
}

}  // namespace emobench::scr
