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

// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria. `--only <name>` runs a single criterion; an
// optional `--cli <path>` also checks bench reproducibility through the
// command-line driver.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "emobench/core/error.hpp"
#include "emobench/dsp/filters.hpp"
#include "emobench/dsp/montage.hpp"
#include "emobench/dsp/preprocess.hpp"
#include "emobench/features/features.hpp"
#include "emobench/harness/harness.hpp"
#include "emobench/io/config.hpp"
#include "emobench/io/report.hpp"
#include "emobench/pipeline/pipeline.hpp"
#include "emobench/scr/scr.hpp"
#include "emobench/spectral/spectral.hpp"
#include "emobench/synth/synth.hpp"

using namespace emobench;

namespace {

std::string g_cli_config;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::vector<Trial> preprocessed(const std::vector<Trial>& raw) {
  std::vector<Trial> out;
  out.reserve(raw.size());
  for (const auto& t : raw) out.push_back(dsp::preprocess_trial(t, dsp::PreprocessConfig{}).trial);
  return out;
}

// ---------------------------------------------------------------------------

void feature_formulas(Outcome& o) {
  constexpr double tol = 1e-9;
  const double de1 = features::differential_entropy_from_variance(1.0);
  const double de0 = features::differential_entropy_from_variance(1.0 / (2.0 * std::numbers::pi * std::numbers::e));
  o.require(std::abs(de1 - 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e)) <= tol &&
                std::abs(de1 - 1.41894) < 5e-6,
            "DE(var=1)");
  o.require(std::abs(de0) <= tol, "DE(var=1/(2 pi e))");

  const std::vector<double> rr1{0.8, 1.0}, rr2{1.0, 0.9, 1.1};
  const double r1 = features::rmssd(rr1), r2 = features::rmssd(rr2);
  o.require(std::abs(r1 - 0.2) <= tol, "RMSSD [0.8, 1.0]");
  o.require(std::abs(r2 - std::sqrt(0.025)) <= tol && std::abs(r2 - 0.15811) < 5e-6, "RMSSD [1.0, 0.9, 1.1]");

  // Two pulses of amplitude 1.0 in the first half, two of 1.2 in the second.
  const std::vector<features::Pulse> pulses{{5, 10, 1.0}, {25, 30, 1.0}, {55, 60, 1.2}, {75, 80, 1.2}};
  const double dp = features::delta_pwa_from_pulses(pulses, 100);
  o.require(std::abs(dp - 0.2 / 1.1) <= tol && std::abs(dp - 0.18182) < 5e-6, "delta PWA hand case");

  // Skewness of the derivative against a direct long-double evaluation.
  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> len(8, 800);
  std::uniform_real_distribution<double> rate_d(10.0, 1000.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto n = static_cast<std::size_t>(len(rng));
    const double rate = rate_d(rng);
    std::vector<double> x(n);
    double acc = 5.0;
    for (auto& v : x) v = (acc += nd(rng) * 0.01 + (k % 3 ? 0.004 * nd(rng) * nd(rng) : 0.0));
    std::vector<long double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (static_cast<long double>(x[i + 1]) - x[i]) * rate;
    long double m = 0;
    for (auto v : d) m += v;
    m /= d.size();
    long double m2 = 0, m3 = 0;
    for (auto v : d) {
      m2 += (v - m) * (v - m);
      m3 += (v - m) * (v - m) * (v - m);
    }
    m2 /= d.size();
    m3 /= d.size();
    const double oracle = static_cast<double>(m3 / std::pow(m2, 1.5L));
    const double got = features::gsr_derivative_skewness(x, rate);
    worst = std::max(worst, std::abs(got - oracle));
  }
  o.require(worst <= tol, "skewness oracle");
  o.detail << "DE(1)=" << fmt(de1, 6) << " RMSSD=" << fmt(r1, 6) << "," << fmt(r2, 6) << " dPWA=" << fmt(dp, 6)
           << " skew max|err| over 1000 segments=" << worst;
}

// ---------------------------------------------------------------------------

double sine_gain_db(const dsp::FilterSpec& spec, double freq, double rate, double seconds) {
  const auto n = static_cast<std::size_t>(rate * seconds);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
  const auto y = dsp::filter_zero_phase(x, spec, rate);
  double ex = 0, ey = 0;
  for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
    ex += x[i] * x[i];
    ey += y[i] * y[i];
  }
  return 10.0 * std::log10(ey / ex);
}

// Lag of the cross-correlation peak between a probe band inside the filter's
// passband and the filtered probe.
int xcorr_lag(const dsp::FilterSpec& spec, double rate, double probe_lo, double probe_hi) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const auto n = static_cast<std::size_t>(rate * 120.0);
  std::vector<double> w(n);
  for (auto& v : w) v = nd(rng);
  const auto x = dsp::filter_zero_phase(w, dsp::FilterSpec::butterworth_bandpass(probe_lo, probe_hi, 4), rate);
  const auto y = dsp::filter_zero_phase(x, spec, rate);
  int best_lag = 0;
  double best = -1e300;
  const int max_lag = static_cast<int>(rate);
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) acc += x[i] * y[static_cast<std::size_t>(static_cast<long>(i) + lag)];
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return best_lag;
}

void filter_conformance(Outcome& o) {
  const dsp::PreprocessConfig pc;
  const double eeg = 250.0, ecg = 500.0, slow = 100.0;
  const double notch50 = sine_gain_db(*pc.eeg_notch, 50.0, eeg, 20.0);
  const double ecg10 = sine_gain_db(*pc.ecg_filter, 10.0, ecg, 20.0);
  const double ecg01 = sine_gain_db(*pc.ecg_filter, 0.1, ecg, 200.0);
  const double eeg01 = sine_gain_db(*pc.eeg_bandpass, 0.1, eeg, 200.0);
  const double ppg01 = sine_gain_db(*pc.ppg_filter, 0.1, slow, 200.0);
  o.require(notch50 <= -20.0, "notch >= 20 dB at 50 Hz");
  o.require(std::abs(ecg10) <= 1.0, "ECG band-pass ripple <= 1 dB at 10 Hz");
  o.require(ecg01 <= -20.0, "ECG band-pass >= 20 dB at 0.1 Hz");
  o.require(eeg01 <= -20.0, "EEG band-pass >= 20 dB at 0.1 Hz");
  o.require(ppg01 <= -20.0, "PPG band-pass >= 20 dB at 0.1 Hz");
  o.detail << "notch@50=" << fmt(notch50, 1) << "dB ecg@10=" << fmt(ecg10, 3) << "dB ecg@0.1=" << fmt(ecg01, 1)
           << "dB eeg@0.1=" << fmt(eeg01, 1) << "dB ppg@0.1=" << fmt(ppg01, 1) << "dB lags";
  struct Probe {
    const char* name;
    dsp::FilterSpec spec;
    double rate, lo, hi;
  };
  const std::vector<Probe> chain{{"eeg-bandpass", *pc.eeg_bandpass, eeg, 2.0, 30.0},
                                 {"eeg-notch", *pc.eeg_notch, eeg, 2.0, 30.0},
                                 {"ecg", *pc.ecg_filter, ecg, 2.0, 30.0},
                                 {"gsr", *pc.gsr_filter, slow, 0.05, 0.3},
                                 {"ppg", *pc.ppg_filter, slow, 1.0, 5.0}};
  for (const auto& c : chain) {
    const int lag = xcorr_lag(c.spec, c.rate, c.lo, c.hi);
    o.detail << " " << c.name << "=" << lag;
    o.require(lag == 0, std::string("zero lag for ") + c.name);
  }
}

// ---------------------------------------------------------------------------

void cluster_validity(Outcome& o) {
  const auto& montage = dsp::standard_montage_59();
  const auto adj = spectral::ElectrodeAdjacency::from_montage(montage.names, montage);
  const std::size_t subjects = 20, channels = montage.names.size();
  std::mt19937_64 rng(424242);
  std::normal_distribution<double> nd;

  // (a) null corpus
  const int null_runs = 200;
  int false_alarms = 0;
  for (int run = 0; run < null_runs; ++run) {
    std::vector<double> d(subjects * channels);
    for (auto& v : d) v = nd(rng);
    spectral::ClusterTestOptions opt;
    opt.seed = 1000 + static_cast<std::uint64_t>(run);
    const auto r = spectral::cluster_permutation_test(d, subjects, adj, opt);
    if (std::any_of(r.clusters.begin(), r.clusters.end(), [&](const spectral::Cluster& c) { return c.p < opt.alpha; }))
      ++false_alarms;
  }
  const double rate = static_cast<double>(false_alarms) / null_runs;
  o.require(rate <= 0.08, "null any-cluster rate <= 8%");

  // (b) d = 1 in a connected 20-channel region grown from Pz
  std::vector<std::size_t> region{*montage.index_of("Pz")};
  for (std::size_t head = 0; region.size() < 20 && head < region.size(); ++head)
    for (auto nb : adj.neighbours(region[head]))
      if (region.size() < 20 && std::find(region.begin(), region.end(), nb) == region.end()) region.push_back(nb);
  const std::set<std::size_t> in_region(region.begin(), region.end());
  const int effect_runs = 50;
  int detected = 0;
  double min_cover = 1.0;
  for (int run = 0; run < effect_runs; ++run) {
    std::vector<double> d(subjects * channels);
    for (std::size_t s = 0; s < subjects; ++s)
      for (std::size_t c = 0; c < channels; ++c) d[s * channels + c] = nd(rng) + (in_region.count(c) ? 1.0 : 0.0);
    spectral::ClusterTestOptions opt;
    opt.seed = 5000 + static_cast<std::uint64_t>(run);
    const auto r = spectral::cluster_permutation_test(d, subjects, adj, opt);
    double cover = 0.0;
    for (const auto& c : r.clusters) {
      if (!(c.p < opt.alpha) || !(c.mass > 0)) continue;
      const auto hit = std::count_if(c.channels.begin(), c.channels.end(), [&](std::size_t ch) { return in_region.count(ch) > 0; });
      cover = std::max(cover, static_cast<double>(hit) / 20.0);
    }
    min_cover = std::min(min_cover, cover);
    if (cover >= 0.8) ++detected;
  }
  const double power = static_cast<double>(detected) / effect_runs;
  o.require(region.size() == 20, "20-channel connected region");
  o.require(power >= 0.95, ">= 80% coverage with p < 0.05 in >= 95% of runs");
  o.detail << "null rate=" << false_alarms << "/" << null_runs << " (" << fmt(100 * rate, 1) << "%), effect detected "
           << detected << "/" << effect_runs << " (min coverage " << fmt(100 * min_cover, 0) << "%)";
}

// ---------------------------------------------------------------------------

void scr_pipeline(Outcome& o) {
  auto spec = synth::discriminative_spec(31);
  spec.eeg_channels = 8;  // EEG plays no part here
  const auto corpus = synth::generate_corpus(spec);
  const auto trials = preprocessed(corpus.trials);

  const auto pct = scr::gsr_increase_by_emotion(trials);
  o.require(pct.contrast.high_mean >= 90.0, "high-arousal mean >= 90%");
  o.require(pct.contrast.low_mean <= 10.0, "low-arousal mean <= 10%");

  std::size_t injected = 0, matched = 0;
  double fp_hits = 0, fp_windows = 0;
  auto add_fp = [&](const Recording& g) {
    const double n = std::floor(g.duration_s() / 4.0 + 1e-9);
    fp_hits += scr::scr_false_positive_rate(g.channel(0), g.sample_rate_hz(), 4.0) * n;
    fp_windows += n;
  };
  for (const auto& t : trials) {
    const auto* g = t.find(Modality::GSR);
    const double offset = t.stimulus_span_s.start_s - g->start_time_s();
    std::vector<double> onsets;
    for (const auto& s : corpus.truth.scrs)
      if (s.trial_id == t.trial_id) onsets.push_back(s.onset_s + offset);
    const auto score = scr::score_scr_detection(scr::detect_scr(g->channel(0), g->sample_rate_hz()), onsets);
    injected += score.injected;
    matched += score.matched;
    for (const auto& r : extract_baseline(t))
      if (r.modality() == Modality::GSR) add_fp(r);
  }
  // Whole recordings of a response-free corpus: declining tonic level only.
  auto null = synth::null_spec(32);
  null.eeg_channels = 8;
  for (const auto& t : preprocessed(synth::generate_corpus(null).trials)) add_fp(*t.find(Modality::GSR));

  const double recall = injected ? static_cast<double>(matched) / injected : 0.0;
  const double fp = fp_hits / fp_windows;
  o.require(injected > 0 && recall >= 0.95, "recall >= 95%");
  o.require(fp <= 0.05, "false positives <= 5%");
  o.detail << "high=" << fmt(pct.contrast.high_mean, 1) << "% low=" << fmt(pct.contrast.low_mean, 1)
           << "% per-emotion{";
  for (auto e : kAllEmotions) o.detail << to_string(e) << ":" << fmt(pct.percent[class_index(e)], 1) << (e == Emotion::Surprise ? "" : " ");
  o.detail << "} recall=" << matched << "/" << injected << " fp=" << fmt(100 * fp, 2) << "% of " << fp_windows
           << " windows";
}

// ---------------------------------------------------------------------------

void labeling_effect(Outcome& o) {
  const auto corpus = synth::generate_corpus(synth::discriminative_spec(1));
  const auto trials = preprocessed(corpus.trials);
  harness::BenchmarkConfig cfg;
  cfg.seed = 1;
  const auto r = harness::run_benchmark(trials, cfg);
  using harness::FeatureSelection;
  using harness::StrategyKind;
  const auto acc = [&](StrategyKind s, const char* c, FeatureSelection f) { return r.find(s, c, f)->accuracy.mean; };
  for (const char* clf : {"knn", "mlp"}) {
    for (const auto& sel : {FeatureSelection::eeg_only(), FeatureSelection::all()}) {
      const double fine = acc(StrategyKind::Fine, clf, sel), whole = acc(StrategyKind::Whole, clf, sel);
      o.require(fine - whole >= 5.0, std::string(clf) + " " + sel.name() + " fine - whole >= 5");
      o.detail << clf << "/" << sel.name() << " fine=" << fmt(fine, 1) << " whole=" << fmt(whole, 1) << "; ";
    }
    const double fused = acc(StrategyKind::Fine, clf, FeatureSelection::all());
    const double eeg = acc(StrategyKind::Fine, clf, FeatureSelection::eeg_only());
    o.require(fused >= eeg, std::string(clf) + " fusion >= EEG-only");
  }
  o.detail << "subjects=" << r.subjects.size();
}

// ---------------------------------------------------------------------------

void harness_integrity(Outcome& o, const std::string& cli) {
  auto spec = synth::discriminative_spec(17);
  spec.eeg_channels = 8;
  const auto trials = preprocessed(synth::generate_corpus(spec).trials);
  const auto ds = harness::build_fine_dataset(trials);
  const auto rows = harness::extract_all(ds);

  harness::BenchmarkConfig cfg;
  cfg.mlp.epochs = 10;
  std::size_t cells = 0, folds_checked = 0;
  for (const char* clf : {"knn", "mlp"}) {
    for (const auto& sel : {harness::FeatureSelection::eeg_only(), harness::FeatureSelection::all()}) {
      const auto cell = harness::run_cell(rows, harness::StrategyKind::Fine, clf, sel, cfg);
      ++cells;
      o.require(cell.folds.size() == 20, "exactly 20 LOSO folds");
      for (const auto& f : cell.folds) {
        std::array<std::size_t, kEmotionCount> expect{};
        std::vector<std::vector<double>> train;
        for (const auto& r : rows) {
          if (r.participant_id == f.held_out) ++expect[class_index(r.label)];
          else train.push_back(harness::fuse_features(r, sel));
        }
        for (std::size_t a = 0; a < kEmotionCount; ++a) {
          std::size_t sum = 0;
          for (auto v : f.metrics.confusion[a]) sum += v;
          o.require(sum == expect[a], "confusion row sum equals class test count");
        }
        // Recompute the fold's standardizer from training rows alone.
        harness::Matrix x(static_cast<Eigen::Index>(train.size()), static_cast<Eigen::Index>(train[0].size()));
        for (std::size_t i = 0; i < train.size(); ++i)
          for (std::size_t j = 0; j < train[i].size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = train[i][j];
        const double expect_sum = harness::Standardizer::fit(x).mean.sum();
        o.require(close(f.train_mean_checksum, expect_sum, 1e-9), "fold normalisation uses training rows only");
        ++folds_checked;
      }
    }
  }

  // Byte reproducibility of the bench report.
  auto pc = io::PipelineConfig{};
  pc.synth = synth::discriminative_spec(7);
  pc.synth.n_subjects = 5;
  pc.synth.eeg_channels = 8;
  pc.bench.mlp.epochs = 5;
  io::apply_seed(pc, 7);
  const auto a = pipeline::run_command("bench", pc, std::nullopt, std::nullopt).dump(1);
  const auto b = pipeline::run_command("bench", pc, std::nullopt, std::nullopt).dump(1);
  o.require(a == b, "bench report byte-identical in process");
  std::string via_cli = "not run";
  if (!cli.empty() && !g_cli_config.empty()) {
    auto run = [&] {
      const std::string cmd = cli + " bench --seed 11 --config " + g_cli_config;
      std::unique_ptr<FILE, int (*)(FILE*)> p(popen(cmd.c_str(), "r"), pclose);
      std::string out;
      char buf[4096];
      while (p && std::fgets(buf, sizeof buf, p.get())) out += buf;
      return out;
    };
    const auto c1 = run(), c2 = run();
    o.require(!c1.empty() && c1 == c2, "bench report byte-identical via CLI");
    via_cli = c1.empty() ? "empty" : (c1 == c2 ? "identical" : "differs");
  }
  o.detail << cells << " cells x 20 folds, " << folds_checked << " folds audited; report " << a.size()
           << " bytes identical=" << (a == b) << "; cli " << via_cli;
}

// ---------------------------------------------------------------------------

Trial blank_trial(double duration_s, const std::vector<double>& events) {
  Trial t;
  t.trial_id = "T";
  t.participant_id = "P";
  t.stimulus_span_s = {10.0, 10.0 + duration_s};
  t.baseline_span_s = TimeSpan{0.0, 10.0};
  const double rate = 100.0;
  const auto n = static_cast<std::size_t>((duration_s + 10.0) * rate);
  for (auto m : kAllModalities) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
    t.recordings.emplace_back(m, std::vector<std::string>{"c"}, rate, x);
  }
  for (double e : events) t.annotations.push_back({e, Emotion::Fear, Intensity::High, "s", "P"});
  return t;
}

void dataset_constructors(Outcome& o) {
  std::size_t checked = 0;
  // Fine: interior events give exactly the three shifted windows.
  for (double t : {3.0, 10.0, 30.0, 57.0, 12.34}) {
    const std::vector<Trial> trials{blank_trial(60.0, {t})};
    const auto d = harness::build_fine_dataset(trials);
    std::set<std::pair<long long, long long>> got, want;
    for (const auto& w : d.windows) got.insert({std::llround(w.window_span_s.start_s * 1e6), std::llround(w.window_span_s.end_s * 1e6)});
    for (double s : {-1.0, 0.0, 1.0}) want.insert({std::llround((t + s - 2.0) * 1e6), std::llround((t + s + 2.0) * 1e6)});
    o.require(got == want && d.skipped == 0, "fine triple for interior event at " + fmt(t, 2));
    ++checked;
  }
  // Near the edges the out-of-bounds shifts are skipped, the rest kept.
  for (auto [t, keep] : std::vector<std::pair<double, std::size_t>>{{2.5, 2}, {1.5, 1}, {57.5, 2}, {58.5, 1}, {0.5, 0}}) {
    const std::vector<Trial> trials{blank_trial(60.0, {t})};
    const auto d = harness::build_fine_dataset(trials);
    o.require(d.windows.size() == keep && d.skipped == 3 - keep, "fine skips out-of-bounds shifts at " + fmt(t, 1));
    for (const auto& w : d.windows)
      o.require(w.window_span_s.start_s >= -1e-9 && w.window_span_s.end_s <= 60.0 + 1e-9, "kept windows in bounds");
    ++checked;
  }
  // Whole: floor((D - 4) / 2) + 1 windows.
  std::size_t d60 = 0;
  for (double dur : {4.0, 5.0, 6.0, 7.5, 36.0, 59.0, 60.0, 61.0, 120.0, 300.0}) {
    const std::vector<Trial> trials{blank_trial(dur, {dur / 2.0})};
    const auto d = harness::build_whole_dataset(trials);
    const auto want = static_cast<std::size_t>(std::floor((dur - 4.0) / 2.0)) + 1;
    if (dur == 60.0) d60 = d.windows.size();
    o.require(d.windows.size() == want, "whole count for D=" + fmt(dur, 1));
    ++checked;
  }
  o.require(d60 == 29, "29 windows for D=60");
  o.detail << checked << " configurations, whole(60 s)=" << d60 << " windows";
}

// ---------------------------------------------------------------------------

void statistics_utilities(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> rating(1, 7), size(2, 40);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  double worst_f = 0.0, worst_p = 0.0;
  int compared = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<std::vector<double>> g(2);
    for (auto& grp : g) {
      grp.resize(static_cast<std::size_t>(size(rng)));
      for (auto& v : grp) v = rating(rng) + (k % 2 ? jitter(rng) : 0.0);
    }
    const auto r = scr::levene_median(g);
    // Brute force: one-way ANOVA on absolute deviations from group medians.
    std::vector<std::vector<long double>> z;
    long double grand = 0;
    std::size_t n = 0;
    for (const auto& grp : g) {
      auto s = grp;
      std::sort(s.begin(), s.end());
      const long double med = s.size() % 2 ? s[s.size() / 2] : (static_cast<long double>(s[s.size() / 2 - 1]) + s[s.size() / 2]) / 2;
      z.emplace_back();
      for (double v : grp) {
        z.back().push_back(std::fabs(v - med));
        grand += z.back().back();
        ++n;
      }
    }
    grand /= n;
    long double ssb = 0, ssw = 0;
    for (const auto& zg : z) {
      long double m = 0;
      for (auto v : zg) m += v;
      m /= zg.size();
      ssb += zg.size() * (m - grand) * (m - grand);
      for (auto v : zg) ssw += (v - m) * (v - m);
    }
    const double d1 = 1.0, d2 = static_cast<double>(n) - 2.0;
    if (ssw == 0) {
      o.require(ssb == 0 ? (r.p == 1.0) : (r.p == 0.0), "degenerate Levene case");
      continue;
    }
    const double f = static_cast<double>((ssb / d1) / (ssw / d2));
    const double p = boost::math::ibetac(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2));
    worst_f = std::max(worst_f, std::abs(r.f - f) / std::max(1.0, f));
    worst_p = std::max(worst_p, std::abs(r.p - p));
    ++compared;
  }
  o.require(worst_f <= 1e-9 && worst_p <= 1e-9, "Levene within 1e-9 of brute force");
  const std::vector<std::vector<double>> same{{5, 5, 5, 5}, {5, 5, 5, 5}};
  const auto id = scr::levene_median(same);
  o.require(id.p == 1.0 && id.f == 0.0, "identical groups give p = 1");
  o.detail << compared << " random pairs, max rel|dF|=" << worst_f << " max|dp|=" << worst_p
           << "; identical groups F=" << id.f << " p=" << id.p;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only, cli;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string a = argv[i];
    if (a == "--only") only = argv[i + 1];
    else if (a == "--cli") cli = argv[i + 1];
    else if (a == "--cli-config") g_cli_config = argv[i + 1];
    else {
      std::cerr << "usage: acceptance [--only NAME] [--cli PATH --cli-config FILE]\n";
      return 64;
    }
  }

  struct Criterion {
    const char* name;
    double limit_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {"feature-formulas", 10, feature_formulas},
      {"filter-conformance", 30, filter_conformance},
      {"cluster-permutation-validity", 600, cluster_validity},
      {"scr-pipeline", 60, scr_pipeline},
      {"labeling-strategy-effect", 900, labeling_effect},
      {"harness-integrity", 600, [&](Outcome& o) { harness_integrity(o, cli); }},
      {"dataset-constructors", 10, dataset_constructors},
      {"statistics-utilities", 10, statistics_utilities},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.limit_s, "runtime < " + fmt(c.limit_s, 0) + " s");
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " (" << fmt(secs, 1) << " s): " << o.detail.str() << std::endl;
  }
  return failed;
}
