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

#include "emobench/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "emobench/core/bands.hpp"
#include "emobench/core/error.hpp"
#include "emobench/dsp/fft.hpp"
#include "emobench/dsp/montage.hpp"
#include "emobench/synth/waveforms.hpp"

namespace emobench::synth {

namespace {

constexpr double kEffectHalfWidth = 2.0;
constexpr double kTaper = 0.25;

// Independent stream per (seed, subject, trial, purpose).
std::mt19937_64 stream(std::uint64_t seed, std::size_t subject, std::size_t trial, std::uint32_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(subject), static_cast<std::uint32_t>(trial), purpose};
  return std::mt19937_64(seq);
}

// 1 inside |dt| <= 2 - taper, raised-cosine down to 0 at |dt| = 2.
double event_window(double dt) {
  const double a = std::abs(dt);
  if (a >= kEffectHalfWidth) return 0.0;
  if (a <= kEffectHalfWidth - kTaper) return 1.0;
  return 0.5 + 0.5 * std::cos(std::numbers::pi * (a - (kEffectHalfWidth - kTaper)) / kTaper);
}

std::vector<double> band_noise(std::mt19937_64& rng, std::size_t n, double rate, double lo, double hi,
                               dsp::RealFft& fft) {
  std::normal_distribution<double> nd;
  std::vector<double> x(fft.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = nd(rng);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.forward(x, spec);
  std::size_t kept = 0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(fft.size());
    if (f >= lo && f < hi)
      ++kept;
    else
      spec[k] = 0.0;
  }
  fft.inverse(spec, x);
  // White input of unit variance keeps a 2 * kept / N share of its power.
  const double scale = kept ? 1.0 / (static_cast<double>(fft.size()) *
                                     std::sqrt(2.0 * static_cast<double>(kept) / static_cast<double>(fft.size())))
                            : 0.0;
  x.resize(n);
  for (auto& v : x) v *= scale;
  return x;
}

int rating(std::mt19937_64& rng, double mean, double sd) {
  std::normal_distribution<double> nd(mean, sd);
  return static_cast<int>(std::clamp(std::lround(nd(rng)), 1L, 7L));
}

void quantise(std::vector<double>& x) {
  for (auto& v : x) v = static_cast<double>(static_cast<float>(v));
}

std::string two_digit(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  auto bad = [](const std::string& m) { fail(Errc::InvalidSpec, m); };
  if (n_subjects == 0) bad("n_subjects must be positive");
  if (trials_per_subject == 0) bad("trials_per_subject must be positive");
  if (!(stimulus_s >= 4.0)) bad("stimulus_s must be >= 4");
  if (!(baseline_s >= 2.0)) bad("baseline_s must be >= 2");
  if (eeg_channels == 0 || eeg_channels > dsp::standard_montage_59().names.size())
    bad("eeg_channels must be in 1..59");
  for (double r : {eeg_rate_hz, ecg_rate_hz, gsr_rate_hz, ppg_rate_hz})
    if (!(r > 0.0)) bad("sample rates must be positive");
  if (eeg_rate_hz < 100.0) bad("eeg_rate_hz must be >= 100 to hold the gamma band");
  if (events_per_trial > 0 &&
      2.0 * event_margin_s + static_cast<double>(events_per_trial - 1) * event_spacing_s > stimulus_s)
    bad("events do not fit in the stimulus with the requested margin and spacing");
  if (event_margin_s < 0.0 || event_spacing_s < 0.0) bad("event margin and spacing must be >= 0");
  for (double v : band_rms_uV)
    if (!(v >= 0.0)) bad("band_rms_uV must be >= 0");
  const auto bands = standard_bands();
  for (const auto& e : effects) {
    if (std::none_of(bands.begin(), bands.end(), [&](const BandDef& b) { return b.name == e.band; }))
      bad("unknown band '" + e.band + "'");
    if (!(e.gain >= 0.0)) bad("effect gain must be >= 0");
    const auto& m = dsp::standard_montage_59();
    if (e.channels.empty() && region_channels(e.region, m.names).empty()) bad("unknown or empty region '" + e.region + "'");
    for (const auto& c : e.channels)
      if (!m.index_of(c)) bad("unknown channel '" + c + "'");
  }
  if (scr) {
    if (!(scr->probability >= 0.0 && scr->probability <= 1.0)) bad("scr.probability must be in [0, 1]");
    if (!(scr->amplitude_min_uS >= 0.0 && scr->amplitude_max_uS >= scr->amplitude_min_uS))
      bad("scr amplitude range is invalid");
    if (!(scr->latency_min_s >= 0.0 && scr->latency_max_s >= scr->latency_min_s)) bad("scr latency range is invalid");
    if (!(scr->spontaneous_per_min >= 0.0)) bad("scr.spontaneous_per_min must be >= 0");
  }
  if (!(gsr_tonic_min_uS > 0.0 && gsr_tonic_max_uS >= gsr_tonic_min_uS)) bad("GSR tonic range is invalid");
  if (!(rr_mean_min_s > 0.3 && rr_mean_max_s >= rr_mean_min_s && rr_mean_max_s < 2.0)) bad("RR range is invalid");
  for (double s : rr_event_scale)
    if (!(s >= 0.0)) bad("rr_event_scale must be >= 0");
  for (double s : pwa_event_slope)
    if (!(std::abs(s) < 0.45)) bad("pwa_event_slope must be within (-0.45, 0.45)");
  for (double s : {subject_gain_sd, eeg_noise_uV, line_noise_uV, gsr_noise_uS, rr_jitter_s, pwa_noise, ecg_noise_uV,
                   ppg_noise, immediate_jitter_s, delayed_jitter_s, immediate_rating_sd, delayed_rating_sd})
    if (!(s >= 0.0)) bad("noise and jitter parameters must be >= 0");
}

std::vector<std::string> region_channels(const std::string& region, const std::vector<std::string>& channels) {
  const auto& m = dsp::standard_montage_59();
  std::vector<std::string> out;
  for (const auto& c : channels) {
    const auto idx = m.index_of(c);
    if (!idx) continue;
    const auto& p = m.positions[*idx];
    bool in = false;
    if (region == "all") in = true;
    else if (region == "frontal") in = p[1] > 0.55;
    else if (region == "central") in = std::abs(p[1]) < 0.35 && std::abs(p[0]) < 0.8;
    else if (region == "posterior") in = p[1] < -0.55;
    else if (region == "left") in = p[0] < -0.6;
    else if (region == "right") in = p[0] > 0.6;
    if (in) out.push_back(c);
  }
  return out;
}

SynthSpec null_spec(std::uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  s.effects.clear();
  s.scr.reset();
  return s;
}

SynthSpec discriminative_spec(std::uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  s.effects = {
      {Emotion::Anger, "beta", "frontal", {}, 1.2},        {Emotion::Disgust, "theta", "central", {}, 1.2},
      {Emotion::Fear, "alpha", "posterior", {}, 1.0 / 1.2}, {Emotion::Happiness, "gamma", "left", {}, 1.2},
      {Emotion::Sadness, "alpha", "frontal", {}, 1.2},     {Emotion::Surprise, "theta", "posterior", {}, 1.2},
  };
  s.rr_event_scale = {0.6, 1.6, 0.4, 1.3, 2.0, 0.8};
  s.pwa_event_slope = {-0.10, 0.0, -0.15, 0.05, 0.10, -0.05};
  return s;
}

SynthCorpus generate_corpus(const SynthSpec& spec) {
  spec.validate();
  SynthCorpus out;
  out.truth.seed = spec.seed;
  const auto bands = standard_bands();
  const auto& montage = dsp::standard_montage_59();
  const std::vector<std::string> eeg_names(montage.names.begin(),
                                           montage.names.begin() + static_cast<std::ptrdiff_t>(spec.eeg_channels));
  const auto posterior = region_channels("posterior", eeg_names);

  // Effect -> channel indices among eeg_names.
  std::vector<std::vector<std::size_t>> effect_channels;
  for (const auto& e : spec.effects) {
    const auto names = e.channels.empty() ? region_channels(e.region, eeg_names) : e.channels;
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
      const auto it = std::find(eeg_names.begin(), eeg_names.end(), n);
      if (it != eeg_names.end()) idx.push_back(static_cast<std::size_t>(it - eeg_names.begin()));
    }
    effect_channels.push_back(std::move(idx));
  }

  const double total_s = spec.baseline_s + spec.stimulus_s;
  const double b0 = spec.baseline_s;
  const auto n_eeg = static_cast<std::size_t>(std::llround(total_s * spec.eeg_rate_hz));
  dsp::RealFft fft(dsp::next_pow2(n_eeg));

  for (std::size_t s = 0; s < spec.n_subjects; ++s) {
    const std::string pid = "S" + two_digit(s + 1);
    auto subj_rng = stream(spec.seed, s, 0xFFFF, 0);
    std::normal_distribution<double> nd;
    std::array<double, 5> subj_gain{};
    for (auto& g : subj_gain) g = std::exp(spec.subject_gain_sd * nd(subj_rng));
    std::uniform_real_distribution<double> u01;
    const double rr_mean = spec.rr_mean_min_s + (spec.rr_mean_max_s - spec.rr_mean_min_s) * u01(subj_rng);
    const double pwa_base = 0.8 + 0.4 * u01(subj_rng);

    for (std::size_t k = 0; k < spec.trials_per_subject; ++k) {
      const Emotion emotion = kAllEmotions[k % kEmotionCount];
      Trial t;
      t.participant_id = pid;
      t.session_id = pid + "-sess";
      t.trial_id = pid + "-T" + two_digit(k + 1);
      t.stimulus_id = "clip-" + std::string(to_string(emotion)) + "-" + std::to_string(k / kEmotionCount + 1);
      t.baseline_span_s = TimeSpan{0.0, b0};
      t.stimulus_span_s = {b0, total_s};

      // Events: rejection sampling under margin and spacing constraints.
      auto ev_rng = stream(spec.seed, s, k, 1);
      std::vector<double> events;
      const double lo = spec.event_margin_s, hi = spec.stimulus_s - spec.event_margin_s;
      for (int attempt = 0; events.size() < spec.events_per_trial; ++attempt) {
        if (attempt > 10000) {
          // Deterministic fallback: evenly spaced.
          events.clear();
          for (std::size_t e = 0; e < spec.events_per_trial; ++e)
            events.push_back(lo + (hi - lo) * (static_cast<double>(e) + 0.5) /
                                      static_cast<double>(spec.events_per_trial));
          break;
        }
        const double c = lo + (hi - lo) * u01(ev_rng);
        if (std::all_of(events.begin(), events.end(),
                        [&](double e) { return std::abs(e - c) >= spec.event_spacing_s; }))
          events.push_back(c);
      }
      std::sort(events.begin(), events.end());

      std::normal_distribution<double> imm(0.0, spec.immediate_jitter_s), del(0.0, spec.delayed_jitter_s);
      for (std::size_t e = 0; e < events.size(); ++e) {
        EventTruth et;
        et.trial_id = t.trial_id;
        et.participant_id = pid;
        et.index = e;
        et.label = emotion;
        et.t_true_s = events[e];
        et.t_immediate_s = std::clamp(events[e] + imm(ev_rng), 0.0, spec.stimulus_s);
        et.t_delayed_s = std::clamp(events[e] + del(ev_rng), 0.0, spec.stimulus_s);
        et.rating_immediate = rating(ev_rng, spec.immediate_rating_mean, spec.immediate_rating_sd);
        et.rating_delayed = rating(ev_rng, spec.delayed_rating_mean, spec.delayed_rating_sd);
        const auto intensity = kAllIntensities[static_cast<std::size_t>(u01(ev_rng) * 3.0) % 3];
        t.annotations.push_back({et.t_immediate_s, emotion, intensity, t.session_id, pid});
        out.truth.events.push_back(et);
      }

      // EEG.
      {
        auto rng = stream(spec.seed, s, k, 2);
        std::vector<double> samples(spec.eeg_channels * n_eeg, 0.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (std::size_t c = 0; c < spec.eeg_channels; ++c) {
          double* ch = samples.data() + c * n_eeg;
          const bool is_post = std::find(posterior.begin(), posterior.end(), eeg_names[c]) != posterior.end();
          for (std::size_t b = 0; b < bands.size(); ++b) {
            const double hi_hz = std::min(bands[b].high_hz, 0.5 * spec.eeg_rate_hz);
            auto x = band_noise(rng, n_eeg, spec.eeg_rate_hz, bands[b].low_hz, hi_hz, fft);
            double amp = spec.band_rms_uV[b] * subj_gain[b];
            if (is_post && bands[b].name == "alpha") amp *= spec.posterior_alpha_boost;
            std::vector<std::pair<double, double>> mods;  // (event session time, gain)
            for (std::size_t ei = 0; ei < spec.effects.size(); ++ei) {
              const auto& eff = spec.effects[ei];
              if (eff.emotion != emotion || eff.band != bands[b].name) continue;
              if (std::find(effect_channels[ei].begin(), effect_channels[ei].end(), c) == effect_channels[ei].end())
                continue;
              for (double e : events) mods.emplace_back(b0 + e, eff.gain);
            }
            for (std::size_t i = 0; i < n_eeg; ++i) {
              double g = 1.0;
              const double ti = static_cast<double>(i) / spec.eeg_rate_hz;
              for (const auto& [te, gain] : mods) g *= 1.0 + (gain - 1.0) * event_window(ti - te);
              ch[i] += amp * g * x[i];
            }
          }
          std::normal_distribution<double> wn(0.0, spec.eeg_noise_uV);
          const double ph = phase(rng);
          for (std::size_t i = 0; i < n_eeg; ++i)
            ch[i] += wn(rng) + spec.line_noise_uV * std::sin(2.0 * std::numbers::pi * 50.0 *
                                                                 static_cast<double>(i) / spec.eeg_rate_hz + ph);
        }
        for (std::size_t ei = 0; ei < spec.effects.size(); ++ei) {
          const auto& eff = spec.effects[ei];
          if (eff.emotion != emotion || effect_channels[ei].empty()) continue;
          for (std::size_t e = 0; e < events.size(); ++e) {
            InjectedBandEffect rec;
            rec.trial_id = t.trial_id;
            rec.event_index = e;
            rec.emotion = emotion;
            rec.band = eff.band;
            for (auto c : effect_channels[ei]) rec.channels.push_back(eeg_names[c]);
            rec.gain = eff.gain;
            rec.span_s = {events[e] - kEffectHalfWidth, events[e] + kEffectHalfWidth};
            out.truth.band_effects.push_back(std::move(rec));
          }
        }
        quantise(samples);
        t.recordings.emplace_back(Modality::EEG, eeg_names, spec.eeg_rate_hz, std::move(samples));
      }

      // Heart: one RR series drives both ECG and PPG.
      auto heart_rng = stream(spec.seed, s, k, 3);
      std::vector<double> beats{-0.5 + 0.5 * u01(heart_rng)};
      std::vector<double> rr;
      {
        std::normal_distribution<double> jn;
        while (beats.back() < total_s + 1.0) {
          const double tb = beats.back();
          double scale = 1.0;
          for (double e : events)
            if (std::abs(tb - (b0 + e)) <= kEffectHalfWidth) scale = spec.rr_event_scale[class_index(emotion)];
          const double r = std::max(0.35, rr_mean + spec.rr_jitter_s * scale * jn(heart_rng));
          rr.push_back(r);
          beats.push_back(tb + r);
        }
        out.truth.rr_series.emplace_back(t.trial_id, rr);
      }
      {
        const auto n = static_cast<std::size_t>(std::llround(total_s * spec.ecg_rate_hz));
        auto x = ecg_waveform(beats, spec.ecg_rate_hz, n);
        std::normal_distribution<double> wn(0.0, spec.ecg_noise_uV);
        const double wander_phase = 2.0 * std::numbers::pi * u01(heart_rng);
        for (std::size_t i = 0; i < n; ++i)
          x[i] += wn(heart_rng) +
                  50.0 * std::sin(2.0 * std::numbers::pi * 0.25 * static_cast<double>(i) / spec.ecg_rate_hz + wander_phase);
        quantise(x);
        t.recordings.emplace_back(Modality::ECG, std::vector<std::string>{"ECG"}, spec.ecg_rate_hz, std::move(x));
      }
      {
        std::normal_distribution<double> an(0.0, spec.pwa_noise);
        std::vector<double> amps;
        const double slope = spec.pwa_event_slope[class_index(emotion)];
        for (double tb : beats) {
          double a = pwa_base * (1.0 + an(heart_rng));
          for (double e : events) {
            const double dt = tb + 0.3 - (b0 + e);  // systolic peak time relative to the event
            if (std::abs(dt) <= kEffectHalfWidth) a *= 1.0 + slope * dt;
          }
          amps.push_back(a);
        }
        const auto n = static_cast<std::size_t>(std::llround(total_s * spec.ppg_rate_hz));
        auto x = ppg_waveform(beats, amps, spec.ppg_rate_hz, n);
        std::normal_distribution<double> wn(0.0, spec.ppg_noise);
        for (auto& v : x) v += wn(heart_rng);
        quantise(x);
        t.recordings.emplace_back(Modality::PPG, std::vector<std::string>{"PPG"}, spec.ppg_rate_hz, std::move(x));
      }

      // GSR.
      {
        auto rng = stream(spec.seed, s, k, 4);
        const auto n = static_cast<std::size_t>(std::llround(total_s * spec.gsr_rate_hz));
        const double tonic0 = spec.gsr_tonic_min_uS + (spec.gsr_tonic_max_uS - spec.gsr_tonic_min_uS) * u01(rng);
        const double slope = spec.gsr_slope_uS_per_s * (0.5 + u01(rng));
        std::vector<std::pair<double, double>> scrs;  // (session onset, amplitude)
        if (spec.scr) {
          const auto& p = *spec.scr;
          for (std::size_t e = 0; e < events.size(); ++e) {
            const double draw = u01(rng);
            const double amp = p.amplitude_min_uS + (p.amplitude_max_uS - p.amplitude_min_uS) * u01(rng);
            const double lat = p.latency_min_s + (p.latency_max_s - p.latency_min_s) * u01(rng);
            if (p.high_arousal_only && !is_high_arousal(emotion)) continue;
            if (draw >= p.probability) continue;
            scrs.emplace_back(b0 + events[e] + lat, amp);
            out.truth.scrs.push_back({t.trial_id, events[e] + lat, amp, e});
          }
          if (p.spontaneous_per_min > 0.0) {
            std::exponential_distribution<double> gap(p.spontaneous_per_min / 60.0);
            for (double ts = gap(rng); ts < spec.stimulus_s; ts += gap(rng)) {
              const double amp = p.amplitude_min_uS + (p.amplitude_max_uS - p.amplitude_min_uS) * u01(rng);
              scrs.emplace_back(b0 + ts, amp);
              out.truth.scrs.push_back({t.trial_id, ts, amp, std::nullopt});
            }
          }
        }
        std::normal_distribution<double> wn(0.0, spec.gsr_noise_uS);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double ti = static_cast<double>(i) / spec.gsr_rate_hz;
          double v = std::max(0.5, tonic0 - slope * ti);
          for (const auto& [on, amp] : scrs) v += amp * scr_kernel(ti - on);
          x[i] = v + wn(rng);
        }
        quantise(x);
        t.recordings.emplace_back(Modality::GSR, std::vector<std::string>{"GSR"}, spec.gsr_rate_hz, std::move(x));
      }
      out.trials.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<Trial> with_delayed_annotations(const SynthCorpus& corpus) {
  auto trials = corpus.trials;
  for (auto& t : trials) {
    std::size_t i = 0;
    for (const auto& e : corpus.truth.events)
      if (e.trial_id == t.trial_id && i < t.annotations.size()) t.annotations[i++].t_event_s = e.t_delayed_s;
  }
  return trials;
}

}  // namespace emobench::synth
