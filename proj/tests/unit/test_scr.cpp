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
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "unit/fixtures.hpp"

#include "emobench/core/error.hpp"
#include "emobench/scr/scr.hpp"
#include "emobench/synth/waveforms.hpp"

using namespace emobench;
using namespace emobench::scr;

namespace {

constexpr double kRate = 100.0;

std::vector<double> declining(std::size_t n, double start = 6.0, double slope = 0.01) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = start - slope * static_cast<double>(i) / kRate;
  return x;
}

void inject(std::vector<double>& x, double onset_s, double amp) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += amp * synth::scr_kernel(static_cast<double>(i) / kRate - onset_s);
}

Trial gsr_trial(const std::vector<double>& gsr, std::vector<EmotionAnnotation> ann, const std::string& pid = "p0") {
  Trial t;
  t.trial_id = "g-" + pid;
  t.participant_id = pid;
  t.stimulus_span_s = {5.0, 5.0 + static_cast<double>(gsr.size()) / kRate - 5.0};
  t.recordings.emplace_back(Modality::GSR, std::vector<std::string>{"GSR"}, kRate, gsr);
  t.annotations = std::move(ann);
  return t;
}

// One-way ANOVA on absolute deviations from the group medians, computed via
// total minus within sums of squares and the incomplete beta function.
std::pair<double, double> brute_levene(const std::vector<std::vector<double>>& groups) {
  std::vector<long double> all;
  std::vector<std::vector<long double>> z;
  for (const auto& g : groups) {
    auto s = g;
    std::sort(s.begin(), s.end());
    const long double med = s.size() % 2 ? s[s.size() / 2] : (s[s.size() / 2 - 1] + s[s.size() / 2]) / 2.0L;
    z.emplace_back();
    for (double v : g) {
      z.back().push_back(std::fabs(static_cast<long double>(v) - med));
      all.push_back(z.back().back());
    }
  }
  long double gm = 0;
  for (auto v : all) gm += v;
  gm /= all.size();
  long double sst = 0, ssw = 0;
  for (auto v : all) sst += (v - gm) * (v - gm);
  for (const auto& g : z) {
    long double m = 0;
    for (auto v : g) m += v;
    m /= g.size();
    for (auto v : g) ssw += (v - m) * (v - m);
  }
  const double d1 = groups.size() - 1.0, d2 = all.size() - groups.size();
  const double f = static_cast<double>(((sst - ssw) / d1) / (ssw / d2));
  const double p = boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
  return {f, p};
}

}  // namespace

TEST_CASE("declining baseline yields no SCR") {
  const auto x = declining(3000);
  CHECK(detect_scr(x, kRate).empty());
}

TEST_CASE("single injected SCR is recovered") {
  auto x = declining(2000);
  inject(x, 5.0, 0.2);
  const auto ev = detect_scr(x, kRate);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].amplitude_uS == doctest::Approx(0.2).epsilon(0.1));
  CHECK(ev[0].onset_s == doctest::Approx(5.0).epsilon(0.02));
  CHECK(ev[0].peak_s > ev[0].onset_s);
  CHECK(ev[0].rise_time_s == doctest::Approx(ev[0].peak_s - ev[0].onset_s));

  // Adding a constant leaves events unchanged.
  auto shifted = x;
  for (auto& v : shifted) v += 3.7;
  const auto ev2 = detect_scr(shifted, kRate);
  REQUIRE(ev2.size() == 1);
  CHECK(ev2[0].onset_s == ev[0].onset_s);
  CHECK(ev2[0].amplitude_uS == doctest::Approx(ev[0].amplitude_uS).epsilon(1e-9));
}

TEST_CASE("two SCRs 3 s apart keep their order") {
  auto x = declining(2000);
  inject(x, 4.0, 0.15);
  inject(x, 7.0, 0.25);
  const auto ev = detect_scr(x, kRate);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].onset_s < ev[1].onset_s);
  CHECK(ev[0].onset_s == doctest::Approx(4.0).epsilon(0.02));
  CHECK(ev[1].onset_s == doctest::Approx(7.0).epsilon(0.02));
}

TEST_CASE("small wiggles below the candidate amplitude are ignored") {
  auto x = declining(2000);
  const auto noise = fixtures::gaussian_noise(x.size(), 4, 0.0005);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += noise[i];
  for (const auto& e : detect_scr(x, kRate)) CHECK(e.amplitude_uS < kValidAmplitude);
  inject(x, 10.0, 0.1);
  const auto ev = detect_scr(x, kRate);
  CHECK(std::count_if(ev.begin(), ev.end(), [](const ScrEvent& e) { return e.amplitude_uS > kValidAmplitude; }) == 1);
}

TEST_CASE("window restricts the search") {
  auto x = declining(2000);
  inject(x, 4.0, 0.2);
  inject(x, 12.0, 0.2);
  const auto ev = detect_scr(x, kRate, {10.0, 16.0});
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].onset_s >= 10.0);
}

TEST_CASE("post-event amplitude and increase percentage") {
  auto x = declining(4000);
  // Event at stimulus t = 10 (session 15); response begins 0.3 s later.
  inject(x, 15.3, 0.2);
  const auto t = gsr_trial(x, {{10.0, Emotion::Fear, Intensity::High, "s", "p0"},
                               {25.0, Emotion::Sadness, Intensity::Low, "s", "p0"}});
  const double amp = post_event_scr_amplitude(t, t.annotations[0]);
  // Only the first 1.7 s of the rise falls in the horizon.
  CHECK(amp > 0.1);
  CHECK(amp < 0.2);
  CHECK(post_event_scr_amplitude(t, t.annotations[1]) == 0.0);

  CHECK(gsr_increase_percentage({{0.2, 0.2}, {0.2}}) == 100.0);
  CHECK(gsr_increase_percentage({{0.01, 0.0}, {0.04}}) == 0.0);
  CHECK(gsr_increase_percentage({{0.2, 0.01}, {0.06, 0.5}}) == 75.0);
  // Strict inequality against the threshold.
  CHECK(gsr_increase_percentage({{0.05}}) == 0.0);
  // Unequal event counts weight by the literal total.
  CHECK(gsr_increase_percentage({{0.2}, {0.0, 0.0, 0.0}}) == 25.0);
  try {
    gsr_increase_percentage({{}, {}});
    FAIL("expected EmptyEventSet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyEventSet);
  }

  // Non-increasing in the threshold.
  const std::vector<std::vector<double>> amps{{0.02, 0.07, 0.12}, {0.3, 0.051, 0.0}};
  double prev = 101.0;
  for (double th = 0.0; th < 0.4; th += 0.01) {
    const double p = gsr_increase_percentage(amps, th);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("per-emotion table and arousal contrast") {
  std::vector<Trial> trials;
  for (int p = 0; p < 3; ++p) {
    auto x = declining(8000);
    std::vector<EmotionAnnotation> ann;
    double t = 5.0;
    for (auto e : kAllEmotions) {
      ann.push_back({t, e, Intensity::Medium, "s", "p" + std::to_string(p)});
      if (is_high_arousal(e)) inject(x, 5.0 + t + 0.2, 0.2);
      t += 10.0;
    }
    trials.push_back(gsr_trial(x, ann, "p" + std::to_string(p)));
  }
  const auto r = gsr_increase_by_emotion(trials);
  for (auto e : kAllEmotions) {
    CHECK(r.present[class_index(e)]);
    CHECK(r.events[class_index(e)] == 3);
    CHECK(r.percent[class_index(e)] == (is_high_arousal(e) ? 100.0 : 0.0));
  }
  CHECK(r.contrast.high_mean == 100.0);
  CHECK(r.contrast.low_mean == 0.0);
  CHECK(scr_concordance(trials) == 1.0);
}

TEST_CASE("arousal group contrast") {
  std::array<double, kEmotionCount> v{};
  v.fill(50.0);
  CHECK(arousal_group_contrast(v).high_mean == 50.0);
  CHECK(arousal_group_contrast(v).low_mean == 50.0);
  // Anger, Disgust, Fear, Happiness, Sadness, Surprise
  const std::array<double, kEmotionCount> percentages{85.2, 4.6, 98.8, 87.2, 7.4, 92.6};
  const auto c = arousal_group_contrast(percentages);
  CHECK(c.high_mean == doctest::Approx(90.95).epsilon(1e-12));
  CHECK(c.low_mean == doctest::Approx(6.0).epsilon(1e-12));
  std::array<bool, kEmotionCount> present{};
  present.fill(true);
  present[class_index(Emotion::Disgust)] = false;
  try {
    arousal_group_contrast(percentages, present);
    FAIL("expected MissingEmotion");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingEmotion);
  }
}

TEST_CASE("SCR concordance") {
  auto x = declining(3000);
  inject(x, 15.2, 0.1);
  auto t = gsr_trial(x, {{10.0, Emotion::Surprise, Intensity::High, "s", "p0"},
                         {18.0, Emotion::Anger, Intensity::High, "s", "p0"},
                         {14.0, Emotion::Sadness, Intensity::Low, "s", "p0"}});
  const std::vector<Trial> trials{t};
  CHECK(scr_concordance(trials) == doctest::Approx(0.5));
  t.annotations.erase(t.annotations.begin());
  CHECK(scr_concordance(std::vector<Trial>{t}) == 0.0);
  t.annotations = {{14.0, Emotion::Sadness, Intensity::Low, "s", "p0"}};
  CHECK_THROWS_AS(scr_concordance(std::vector<Trial>{t}), Error);
}

TEST_CASE("consistency statistics") {
  const std::vector<double> same{5, 5, 5, 5};
  const auto s = consistency_stats(same, same);
  CHECK(s.levene.f == 0.0);
  CHECK(s.levene.p == 1.0);
  CHECK(s.levene.degenerate);
  CHECK(s.a.cv == 0.0);

  const std::vector<double> g{6, 7, 7, 7};
  CHECK(group_stats(g).mean == 6.75);
  CHECK(group_stats(g).sd == doctest::Approx(0.5));
  CHECK(group_stats(g).cv == doctest::Approx(0.5 / 6.75));

  const auto lv = levene_median({{1, 2, 3, 4, 5}, {2, 4, 6, 8, 10}});
  CHECK(lv.f == doctest::Approx(3.6 / (14.0 / 8.0)).epsilon(1e-12));
  CHECK(lv.df_between == 1.0);
  CHECK(lv.df_within == 8.0);

  CHECK_THROWS_AS(group_stats(std::vector<double>{5}), Error);
  CHECK_THROWS_AS(group_stats(std::vector<double>{5, 8}), Error);
  // Zero spread in each group but different levels of spread is no degenerate case.
  const auto inf = levene_median({{4, 4, 4}, {2, 4, 6}});
  CHECK_FALSE(inf.degenerate);
}

TEST_CASE("Levene matches a brute-force ANOVA on random inputs") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> rating(1, 7);
  std::uniform_int_distribution<int> size(2, 25);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> groups(2 + trial % 3);
    for (auto& g : groups) {
      g.resize(size(rng));
      for (auto& v : g) v = rating(rng) + (trial % 2 ? 0.37 * rating(rng) : 0.0);
    }
    const auto r = levene_median(groups);
    if (r.degenerate || std::isinf(r.f)) continue;
    const auto [f, p] = brute_levene(groups);
    CHECK(r.f == doctest::Approx(f).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(p).epsilon(1e-9));
    CHECK(r.p >= 0.0);
    CHECK(r.p <= 1.0);
  }
}
