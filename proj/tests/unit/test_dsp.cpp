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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "unit/fixtures.hpp"

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"
#include "emobench/dsp/channels.hpp"
#include "emobench/dsp/filters.hpp"
#include "emobench/dsp/montage.hpp"
#include "emobench/dsp/preprocess.hpp"
#include "emobench/dsp/resample.hpp"

using namespace emobench;
using namespace emobench::dsp;

namespace {

Recording single(const std::vector<double>& x, double rate, Modality m = Modality::EEG) {
  return Recording(m, {"Cz"}, rate, x);
}

// Steady-state gain of the zero-phase filter measured with a sine, away from the edges.
double measured_gain(const FilterSpec& spec, double freq, double rate, double seconds) {
  const auto n = static_cast<std::size_t>(rate * seconds);
  const auto x = fixtures::sine(freq, rate, n);
  const auto y = filter_zero_phase(x, spec, rate);
  return fixtures::rms(y, n / 4, 3 * n / 4) / fixtures::rms(x, n / 4, 3 * n / 4);
}

double db(double g) { return 20.0 * std::log10(g); }

}  // namespace

TEST_CASE("Butterworth and notch designs match reference magnitude responses") {
  // Reference magnitudes from an independent design (scipy.signal, sos form).
  const auto ecg = design_butterworth_bandpass(4, 0.5, 40.0, 1000.0);
  const double ecg_f[] = {0.3, 0.5, 5, 10, 40, 60, 200};
  const double ecg_h[] = {0.124528330335, 0.707106781186, 1, 0.999998652781, 0.707106781187, 0.183808838212,
                          0.000870744117804};
  for (int i = 0; i < 7; ++i) CHECK(std::abs(freq_response(ecg, ecg_f[i], 1000.0)) == doctest::Approx(ecg_h[i]).epsilon(1e-6));

  const auto gsr = design_butterworth_lowpass(4, 0.5, 100.0);
  const double gsr_f[] = {0.0, 0.25, 0.5, 1, 5};
  const double gsr_h[] = {1, 0.998053536525, 0.707106781187, 0.0623169730654, 9.67770399014e-05};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(freq_response(gsr, gsr_f[i], 100.0)) == doctest::Approx(gsr_h[i]).epsilon(1e-6));

  const auto ppg = design_butterworth_bandpass(4, 0.5, 8.0, 50.0);
  const double ppg_f[] = {0.2, 0.5, 2, 8, 15};
  const double ppg_h[] = {0.0209585688064, 0.707106781187, 1, 0.707106781187, 0.0208585916492};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(freq_response(ppg, ppg_f[i], 50.0)) == doctest::Approx(ppg_h[i]).epsilon(1e-6));

  const auto notch = design_notch(50.0, 30.0, 250.0);
  const double n_f[] = {45, 49, 51, 60};
  const double n_h[] = {0.987080088315, 0.769533355953, 0.766961430368, 0.996415003109};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(freq_response(notch, n_f[i], 250.0)) == doctest::Approx(n_h[i]).epsilon(1e-6));
  CHECK(std::abs(freq_response(notch, 50.0, 250.0)) < 1e-9);
}

TEST_CASE("odd-order Butterworth designs") {
  const auto lp = design_butterworth_lowpass(3, 10.0, 100.0);
  CHECK(lp.size() == 2);
  CHECK(std::abs(freq_response(lp, 10.0, 100.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  const auto bp = design_butterworth_bandpass(3, 1.0, 20.0, 100.0);
  CHECK(bp.size() == 3);
  CHECK(std::abs(freq_response(bp, 1.0, 100.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(std::abs(freq_response(bp, 20.0, 100.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("EEG notch removes 50 Hz line noise") {
  const double rate = 250.0;
  const auto n = static_cast<std::size_t>(20 * rate);
  const auto x = fixtures::sine(50.0, rate, n, 20.0);
  const auto y = apply_filter(single(x, rate), FilterSpec::notch(50.0)).channel(0);
  std::vector<double> yv(y.begin(), y.end());
  CHECK(fixtures::rms(yv, 0, n) <= 0.1 * fixtures::rms(x, 0, n));
  CHECK(db(measured_gain(FilterSpec::notch(50.0), 50.0, rate, 20.0)) <= -20.0);
  CHECK(std::abs(db(measured_gain(FilterSpec::notch(50.0), 10.0, rate, 20.0))) < 0.1);
}

TEST_CASE("ECG band-pass passband and stopband") {
  const auto spec = FilterSpec::butterworth_bandpass(0.5, 40.0, 4);
  CHECK(std::abs(db(measured_gain(spec, 10.0, 1000.0, 10.0))) <= 1.0);
  CHECK(db(measured_gain(spec, 0.1, 1000.0, 100.0)) <= -20.0);
}

TEST_CASE("GSR low-pass preserves DC") {
  std::vector<double> x(3000, 4.2);
  const auto y = apply_filter(single(x, 100.0, Modality::GSR), FilterSpec::butterworth_lowpass(0.5));
  for (double v : y.channel(0)) CHECK(v == doctest::Approx(4.2).epsilon(0.01));
}

TEST_CASE("EEG FIR band-pass response") {
  const auto spec = FilterSpec::fir_bandpass(0.5, 70.0);
  const auto h = design_fir_bandpass(0.5, 70.0, 250.0, 0.25);
  CHECK(h.size() % 2 == 1);
  CHECK(h.size() >= 3300);
  CHECK(std::abs(db(std::abs(freq_response(h, 10.0, 250.0)))) < 0.1);
  CHECK(db(std::abs(freq_response(h, 0.05, 250.0))) < -20.0);
  CHECK(db(std::abs(freq_response(h, 90.0, 250.0))) < -40.0);
  CHECK(std::abs(db(measured_gain(spec, 10.0, 250.0, 120.0))) < 0.1);
}

TEST_CASE("zero-phase filtering has zero lag") {
  const double rate = 250.0;
  auto noise = fixtures::gaussian_noise(5000, 11);
  const auto x = filter_zero_phase(noise, FilterSpec::butterworth_bandpass(2.0, 30.0, 4), rate);
  for (const auto& spec : {FilterSpec::butterworth_bandpass(1.0, 40.0, 4), FilterSpec::notch(50.0),
                           FilterSpec::butterworth_lowpass(20.0, 4), FilterSpec::fir_bandpass(0.5, 70.0)}) {
    const auto y = filter_zero_phase(x, spec, rate);
    int best_lag = 1000;
    double best = -1e300;
    for (int lag = -25; lag <= 25; ++lag) {
      double acc = 0.0;
      for (std::size_t i = 500; i + 500 < x.size(); ++i) acc += x[i] * y[static_cast<std::size_t>(static_cast<long>(i) + lag)];
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
    CHECK(best_lag == 0);
    CHECK(y.size() == x.size());
  }
}

TEST_CASE("invalid bands are rejected") {
  const std::vector<double> x(1000, 0.0);
  CHECK_THROWS_AS(filter_zero_phase(x, FilterSpec::butterworth_bandpass(0.5, 130.0), 250.0), Error);
  CHECK_THROWS_AS(filter_zero_phase(x, FilterSpec::butterworth_bandpass(10.0, 5.0), 250.0), Error);
  CHECK_THROWS_AS(filter_zero_phase(x, FilterSpec::notch(0.0), 250.0), Error);
  try {
    filter_zero_phase(x, FilterSpec::butterworth_lowpass(60.0), 100.0);
    FAIL("expected InvalidBand");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidBand);
  }
}

TEST_CASE("resampling 1000 -> 250 Hz") {
  const auto ratio = rational_ratio(250.0, 1000.0);
  CHECK(ratio.up == 1);
  CHECK(ratio.down == 4);

  const std::vector<double> c(60000, 5.0);
  const auto y = resample_poly(c, ratio);
  CHECK(y.size() == 15000);
  for (double v : y) CHECK(std::abs(v - 5.0) < 1e-6);

  // Analytically sampled reference.
  const auto x = fixtures::sine(10.0, 1000.0, 10000, 3.0);
  const auto z = resample_poly(x, ratio);
  const auto ref = fixtures::sine(10.0, 250.0, 2500, 3.0);
  REQUIRE(z.size() == ref.size());
  double max_err = 0.0;
  for (std::size_t i = 250; i < 2250; ++i) max_err = std::max(max_err, std::abs(z[i] - ref[i]));
  CHECK(max_err < 0.01 * 3.0);
}

TEST_CASE("non-integer ratios and errors") {
  const auto r = rational_ratio(250.0, 1024.0);
  CHECK(r.up == 125);
  CHECK(r.down == 512);
  const auto x = fixtures::sine(5.0, 1024.0, 4096);
  const auto y = resample_poly(x, r);
  CHECK(y.size() == 1000);
  const auto ref = fixtures::sine(5.0, 250.0, 1000);
  for (std::size_t i = 100; i < 900; ++i) CHECK(std::abs(y[i] - ref[i]) < 0.01);

  CHECK_THROWS_AS(rational_ratio(500.0, 250.0), Error);
  try {
    rational_ratio(1000.0 / std::numbers::pi, 1000.0);
    FAIL("expected IrrationalRatio");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IrrationalRatio);
  }
  const auto rec = resample(fixtures::ramp_recording(Modality::EEG, 2, 1000.0, 2.0), 250.0);
  CHECK(rec.sample_rate_hz() == 250.0);
  CHECK(rec.sample_count() == 500);
}

namespace {
Recording with_variances(const std::vector<double>& sd, std::uint64_t seed) {
  std::vector<std::string> names;
  std::vector<double> s;
  for (std::size_t c = 0; c < sd.size(); ++c) {
    names.push_back(standard_montage_59().names[c]);
    // +/- sd alternating => variance exactly sd^2
    for (std::size_t k = 0; k < 1000; ++k) s.push_back(((k + seed) % 2 == 0 ? 1.0 : -1.0) * sd[c]);
  }
  return Recording(Modality::EEG, names, 250.0, s);
}
}  // namespace

TEST_CASE("bad-channel rule instances") {
  std::vector<double> sd(59, 1.0);
  sd[17] = std::sqrt(11.0);
  auto r = detect_bad_channels(with_variances(sd, 0));
  CHECK(r.median_variance == doctest::Approx(1.0));
  CHECK(r.flagged == std::vector<std::size_t>{17});

  std::fill(sd.begin(), sd.end(), 1.0);
  CHECK(detect_bad_channels(with_variances(sd, 0)).flagged.empty());

  sd[3] = std::sqrt(10.5);
  sd[40] = std::sqrt(9.5);
  CHECK(detect_bad_channels(with_variances(sd, 0)).flagged == std::vector<std::size_t>{3});

  try {
    detect_bad_channels(with_variances({1.0, 2.0}, 0));
    FAIL("expected TooFewChannels");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewChannels);
  }
}

TEST_CASE("bad-channel detection is permutation-equivariant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> sd(20);
    for (auto& v : sd) v = u(rng);
    sd[rep % 20] *= 5.0;
    std::vector<std::size_t> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> sdp(20);
    for (std::size_t i = 0; i < 20; ++i) sdp[i] = sd[perm[i]];
    const auto a = detect_bad_channels(with_variances(sd, 0)).flagged;
    auto b = detect_bad_channels(with_variances(sdp, 0)).flagged;
    for (auto& i : b) i = perm[i];
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("inverse-distance repair") {
  // bad channel 0 at the pole, good channels equidistant on the equator
  const std::vector<Position> pos{{0, 0, 1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}};
  std::vector<double> s;
  for (double v : {999.0, 1.0, 3.0}) s.insert(s.end(), 4, v);
  s.insert(s.end(), 4, 2.0);
  Recording rec(Modality::EEG, {"a", "b", "c", "d"}, 100.0, s);
  BadChannelReport rep;
  rep.flagged = {0, 3};
  const auto fixed = repair_channels(rec, rep, pos);
  // channel 0: equidistant from b=1 and c=3 only (d is also bad)
  CHECK(fixed.channel(0)[0] == doctest::Approx(2.0));
  CHECK(fixed.channel(1)[2] == 1.0);
  CHECK(fixed.channel(2)[2] == 3.0);

  BadChannelReport none;
  const auto same = repair_channels(rec, none, pos);
  CHECK(same.samples() == rec.samples());

  BadChannelReport one_good;
  one_good.flagged = {0, 1, 3};
  const auto f = repair_channels(rec, one_good, pos);
  for (std::size_t c : {0u, 1u, 3u})
    for (double v : f.channel(c)) CHECK(v == 3.0);

  BadChannelReport all;
  all.flagged = {0, 1, 2, 3};
  CHECK_THROWS_AS(repair_channels(rec, all, pos), Error);
}

TEST_CASE("repair weights sum to one on the standard montage") {
  const auto& m = standard_montage_59();
  REQUIRE(m.names.size() == 59);
  for (std::size_t bad = 0; bad < 59; bad += 7) {
    std::vector<Position> good;
    for (std::size_t c = 0; c < 59; ++c)
      if (c != bad) good.push_back(m.positions[c]);
    const auto w = idw_weights(m.positions[bad], good);
    CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // distinct positions on the unit sphere
  for (std::size_t i = 0; i < 59; ++i) {
    const auto& p = m.positions[i];
    CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(1.0));
    for (std::size_t j = i + 1; j < 59; ++j) CHECK(distance(p, m.positions[j]) > 0.05);
  }
  Recording rec(Modality::EEG, {"Cz", "Xx", "Pz"}, 100.0, std::vector<double>(30, 1.0));
  BadChannelReport r;
  r.flagged = {0};
  try {
    repair_channels(rec, r, m);
    FAIL("expected MissingMontage");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingMontage);
  }
}

TEST_CASE("amplitude rejection") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 100.0 * std::sin(0.01 * static_cast<double>(i));
  CHECK(amplitude_reject(single(x, 250.0), 150.0).empty());
  x[400] = 500.0;
  const auto spans = amplitude_reject(single(x, 250.0), 150.0);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].first <= 400);
  CHECK(spans[0].last > 400);
  CHECK(overlaps_any(spans, 300, 200));
  CHECK_FALSE(overlaps_any(spans, 0, 400));
  CHECK_THROWS_AS(amplitude_reject(single(x, 250.0), 0.0), Error);
}

TEST_CASE("preprocessing chain") {
  Trial t;
  t.trial_id = "t";
  t.baseline_span_s = TimeSpan{0.0, 10.0};
  t.stimulus_span_s = {10.0, 30.0};
  std::vector<std::string> names(standard_montage_59().names.begin(), standard_montage_59().names.begin() + 8);
  std::vector<double> eeg;
  for (std::size_t c = 0; c < 8; ++c) {
    auto ch = fixtures::sine(10.0, 1000.0, 30000, c == 5 ? 50.0 : 5.0);
    auto line = fixtures::sine(50.0, 1000.0, 30000, 3.0);
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += line[i] + 20.0;
    eeg.insert(eeg.end(), ch.begin(), ch.end());
  }
  t.recordings.emplace_back(Modality::EEG, names, 1000.0, eeg);
  t.recordings.emplace_back(Modality::GSR, std::vector<std::string>{"gsr"}, 100.0, std::vector<double>(3000, 2.0));
  const auto out = preprocess_trial(t, PreprocessConfig{});
  const auto& r = *out.trial.find(Modality::EEG);
  CHECK(r.sample_rate_hz() == 250.0);
  CHECK(r.sample_count() == 7500);
  REQUIRE(out.report.bad_channels.has_value());
  CHECK(out.report.bad_channels->flagged == std::vector<std::size_t>{5});
  // repaired channel now looks like its neighbours; line noise and DC removed
  std::vector<double> ch5(r.channel(5).begin(), r.channel(5).end());
  CHECK(fixtures::rms(ch5, 1000, 6500) == doctest::Approx(5.0 / std::sqrt(2.0)).epsilon(0.05));
  CHECK(out.trial.find(Modality::GSR)->channel(0)[1500] == doctest::Approx(2.0).epsilon(1e-6));
}
