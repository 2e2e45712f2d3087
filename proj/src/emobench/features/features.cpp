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

#include "emobench/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"
#include "emobench/dsp/filters.hpp"

namespace emobench::features {

double differential_entropy_from_variance(double variance) {
  if (!(variance >= kMinBandVariance))
    fail(Errc::DegenerateVariance, "band variance " + std::to_string(variance) + " below 1e-12");
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double differential_entropy_prebanded(std::span<const double> segment) {
  return differential_entropy_from_variance(stats::variance_population(segment));
}

double differential_entropy(std::span<const double> segment, const BandDef& band, double rate_hz) {
  const double min_len = 2.0 * rate_hz / band.low_hz;
  if (static_cast<double>(segment.size()) < min_len)
    fail(Errc::SegmentTooShort, "segment shorter than two periods of " + band.name);
  const auto banded =
      dsp::filter_zero_phase(segment, dsp::FilterSpec::butterworth_bandpass(band.low_hz, band.high_hz, 4), rate_hz);
  return differential_entropy_prebanded(banded);
}

double gsr_derivative_skewness(std::span<const double> segment, double rate_hz) {
  if (segment.size() < 3) fail(Errc::InvalidArgument, "skewness needs >= 3 samples");
  std::vector<double> v(segment.size() - 1);
  for (std::size_t i = 0; i + 1 < segment.size(); ++i) v[i] = (segment[i + 1] - segment[i]) * rate_hz;
  const double mu = stats::mean(v);
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - mu;
    m2 += d * d;
    m3 += d * d * d;
  }
  const auto n = static_cast<double>(v.size());
  const double sd = std::sqrt(m2 / n);
  if (sd < kMinDerivativeSd) return 0.0;
  return (m3 / n) / (sd * sd * sd);
}

namespace {

std::vector<double> moving_average_centred(const std::vector<double>& x, std::size_t width) {
  const std::size_t half = width / 2;
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(x.size(), i + half + 1);
    y[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return y;
}

}  // namespace

std::vector<std::size_t> detect_r_peaks(std::span<const double> ecg, double rate_hz) {
  if (static_cast<double>(ecg.size()) < 2.0 * rate_hz) fail(Errc::SegmentTooShort, "R-peak detection needs >= 2 s");
  const std::size_t n = ecg.size();
  const auto hi_hz = std::min(15.0, 0.45 * rate_hz);
  const auto banded = dsp::filter_zero_phase(ecg, dsp::FilterSpec::butterworth_bandpass(5.0, hi_hz, 2), rate_hz);

  std::vector<double> energy(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (banded[i + 1] - banded[i - 1]) * rate_hz / 2.0;
    energy[i] = d * d;
  }
  auto width = static_cast<std::size_t>(std::lround(0.15 * rate_hz));
  if (width % 2 == 0) ++width;
  const auto integ = moving_average_centred(energy, width);

  const double peak_max = *std::max_element(integ.begin(), integ.end());
  if (!(peak_max > 1e-18)) fail(Errc::NoPeaksFound, "flat ECG segment");

  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (integ[i] > integ[i - 1] && integ[i] >= integ[i + 1]) candidates.push_back(i);

  const auto refractory = static_cast<std::size_t>(std::lround(kRefractorySeconds * rate_hz));
  const auto init_len = std::min(n, static_cast<std::size_t>(2.0 * rate_hz));
  double spki = *std::max_element(integ.begin(), integ.begin() + static_cast<std::ptrdiff_t>(init_len)) / 3.0;
  double npki = stats::mean(std::span<const double>(integ.data(), init_len)) / 2.0;
  auto threshold = [&] { return npki + 0.25 * (spki - npki); };

  std::vector<std::size_t> accepted;
  std::vector<std::size_t> rejected;
  for (auto c : candidates) {
    const double v = integ[c];
    if (!accepted.empty() && c - accepted.back() < refractory) {
      if (v > integ[accepted.back()]) accepted.back() = c;
      continue;
    }
    if (v > threshold()) {
      // Search back for a missed beat when the gap is unusually long.
      if (accepted.size() >= 2) {
        const double mean_rr =
            static_cast<double>(accepted.back() - accepted.front()) / static_cast<double>(accepted.size() - 1);
        if (static_cast<double>(c - accepted.back()) > 1.66 * mean_rr) {
          std::size_t best = 0;
          double best_v = 0.5 * threshold();
          for (auto r : rejected)
            if (r > accepted.back() + refractory && r + refractory < c && integ[r] > best_v) {
              best = r;
              best_v = integ[r];
            }
          if (best != 0) {
            accepted.push_back(best);
            spki = 0.25 * integ[best] + 0.75 * spki;
          }
        }
      }
      accepted.push_back(c);
      spki = 0.125 * v + 0.875 * spki;
    } else {
      rejected.push_back(c);
      npki = 0.125 * v + 0.875 * npki;
    }
  }

  // Locate each R wave as the signal maximum near its energy peak.
  const auto search = static_cast<std::size_t>(std::lround(0.1 * rate_hz));
  std::vector<std::size_t> peaks;
  for (auto a : accepted) {
    const std::size_t lo = a >= search ? a - search : 0;
    const std::size_t hi = std::min(n - 1, a + search);
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i)
      if (ecg[i] > ecg[best]) best = i;
    if (best == 0 || best == n - 1) continue;
    if (ecg[best] < ecg[best - 1] || ecg[best] < ecg[best + 1]) continue;
    if (!peaks.empty() && best - peaks.back() < refractory) {
      if (ecg[best] > ecg[peaks.back()]) peaks.back() = best;
      continue;
    }
    peaks.push_back(best);
  }
  if (peaks.empty()) fail(Errc::NoPeaksFound, "no QRS complexes above threshold");
  return peaks;
}

std::vector<double> rr_intervals(std::span<const std::size_t> peaks, double rate_hz) {
  std::vector<double> rr;
  for (std::size_t i = 1; i < peaks.size(); ++i) rr.push_back(static_cast<double>(peaks[i] - peaks[i - 1]) / rate_hz);
  return rr;
}

double rmssd(std::span<const double> rr) {
  if (rr.size() < 2) fail(Errc::TooFewIntervals, "RMSSD needs >= 2 RR intervals");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < rr.size(); ++i) acc += (rr[i + 1] - rr[i]) * (rr[i + 1] - rr[i]);
  return std::sqrt(acc / static_cast<double>(rr.size() - 1));
}

std::vector<Pulse> detect_pulses(std::span<const double> ppg, double rate_hz) {
  const std::size_t n = ppg.size();
  if (n < 3) return {};
  const double centre = stats::mean(ppg);
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (ppg[i] > ppg[i - 1] && ppg[i] >= ppg[i + 1] && ppg[i] > centre) maxima.push_back(i);

  // Keep the tallest peak within any 0.33 s neighbourhood (<= 180 bpm).
  const auto min_gap = static_cast<std::size_t>(std::lround(0.33 * rate_hz));
  std::vector<std::size_t> order = maxima;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ppg[a] > ppg[b]; });
  std::vector<std::size_t> peaks;
  for (auto p : order) {
    const bool crowded = std::any_of(peaks.begin(), peaks.end(), [&](std::size_t q) {
      return (p > q ? p - q : q - p) < min_gap;
    });
    if (!crowded) peaks.push_back(p);
  }
  std::sort(peaks.begin(), peaks.end());

  std::vector<Pulse> pulses;
  std::size_t from = 0;
  for (auto p : peaks) {
    std::size_t valley = from;
    for (std::size_t i = from; i < p; ++i)
      if (ppg[i] <= ppg[valley]) valley = i;
    // A minimum on the segment edge belongs to a truncated pulse.
    if (valley != 0 && p > valley) pulses.push_back({valley, p, ppg[p] - ppg[valley]});
    from = p;
  }
  return pulses;
}

double delta_pwa_from_pulses(std::span<const Pulse> pulses, std::size_t n_samples) {
  double pre = 0.0, post = 0.0;
  std::size_t n_pre = 0, n_post = 0;
  for (const auto& p : pulses) {
    if (2 * p.peak < n_samples) {
      pre += p.amplitude;
      ++n_pre;
    } else {
      post += p.amplitude;
      ++n_post;
    }
  }
  if (n_pre == 0 || n_post == 0) fail(Errc::InsufficientPulses, "need a complete pulse in each half of the window");
  const double total = (pre + post) / static_cast<double>(n_pre + n_post);
  if (!(total > 0.0)) fail(Errc::InsufficientPulses, "non-positive mean pulse amplitude");
  return (post / static_cast<double>(n_post) - pre / static_cast<double>(n_pre)) / total;
}

double delta_pwa(std::span<const double> ppg, double rate_hz) {
  const auto pulses = detect_pulses(ppg, rate_hz);
  return delta_pwa_from_pulses(pulses, ppg.size());
}

std::string epoch_id(const Epoch& epoch) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "@%.3f%+.1f", epoch.annotation.t_event_s, epoch.provenance.shift_offset_s);
  char wbuf[64];
  std::snprintf(wbuf, sizeof wbuf, "[%.3f,%.3f]", epoch.window_span_s.start_s, epoch.window_span_s.end_s);
  return epoch.provenance.trial_id + buf + wbuf;
}

namespace {

const Recording& require_block(const Epoch& epoch, Modality m) {
  const auto* r = epoch.find(m);
  if (!r) fail(Errc::MissingModality, epoch.provenance.trial_id + ": epoch lacks " + std::string(to_string(m)));
  return *r;
}

template <class F>
auto with_context(const std::string& context, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    const std::string what = e.what();
    const auto prefix = errc_name(e.code()).size() + 2;
    throw Error(e.code(), context + ": " + (what.size() > prefix ? what.substr(prefix) : what));
  }
}

}  // namespace

FeatureVector extract_features(const Epoch& epoch, const std::vector<BandDef>& bands) {
  const auto& eeg = require_block(epoch, Modality::EEG);
  const auto& gsr = require_block(epoch, Modality::GSR);
  const auto& ecg = require_block(epoch, Modality::ECG);
  const auto& ppg = require_block(epoch, Modality::PPG);
  const std::string id = epoch_id(epoch);

  FeatureVector fv;
  fv.label = epoch.annotation.label;
  fv.epoch_id = id;
  fv.participant_id = epoch.provenance.participant_id;
  fv.eeg_channels = eeg.channel_count();
  fv.bands = bands.size();
  fv.eeg_de.reserve(fv.eeg_channels * fv.bands);
  for (std::size_t c = 0; c < eeg.channel_count(); ++c)
    for (const auto& band : bands)
      fv.eeg_de.push_back(with_context(id + " EEG " + eeg.channel_names()[c] + " " + band.name,
                                       [&] { return differential_entropy(eeg.channel(c), band, eeg.sample_rate_hz()); }));
  fv.gsr_skewness = gsr_derivative_skewness(gsr.channel(0), gsr.sample_rate_hz());
  fv.ecg_rmssd = with_context(id + " ECG", [&] {
    const auto peaks = detect_r_peaks(ecg.channel(0), ecg.sample_rate_hz());
    const auto rr = rr_intervals(peaks, ecg.sample_rate_hz());
    return rmssd(rr);
  });
  fv.ppg_delta_pwa = with_context(id + " PPG", [&] { return delta_pwa(ppg.channel(0), ppg.sample_rate_hz()); });
  return fv;
}

std::vector<std::string> feature_names(const std::vector<std::string>& eeg_channels, const std::vector<BandDef>& bands) {
  std::vector<std::string> names;
  for (const auto& c : eeg_channels)
    for (const auto& b : bands) names.push_back("eeg_" + c + "_" + b.name);
  names.push_back("gsr_skewness");
  names.push_back("ecg_rmssd");
  names.push_back("ppg_delta_pwa");
  return names;
}

}  // namespace emobench::features
