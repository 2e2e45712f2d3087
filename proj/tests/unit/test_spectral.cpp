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
#include <complex>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "unit/fixtures.hpp"

#include "emobench/core/error.hpp"
#include "emobench/dsp/montage.hpp"
#include "emobench/spectral/spectral.hpp"

using namespace emobench;
using namespace emobench::spectral;

namespace {

// Path graph 0 - 1 - ... - (n-1).
ElectrodeAdjacency chain(std::size_t n) {
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    nb[i].push_back(i + 1);
    nb[i + 1].push_back(i);
  }
  return ElectrodeAdjacency(nb);
}

std::vector<double> normal_matrix(std::size_t rows, std::size_t cols, double mu, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(mu, sd);
  std::vector<double> m(rows * cols);
  for (auto& v : m) v = nd(rng);
  return m;
}

Recording eeg(const std::vector<std::vector<double>>& chans, const std::vector<std::string>& names, double rate) {
  std::vector<double> s;
  for (const auto& c : chans) s.insert(s.end(), c.begin(), c.end());
  return Recording(Modality::EEG, names, rate, s);
}

}  // namespace

TEST_CASE("Welch: sine power concentrates in its band") {
  const auto x = fixtures::sine(10.0, 250.0, 1000);
  const auto s = welch_spectrum(x, 250.0);
  CHECK(s.resolution_hz == 1.0);
  CHECK(s.density.size() == 126);
  double total = 0.0, alpha = 0.0;
  for (std::size_t k = 0; k < s.density.size(); ++k) {
    total += s.density[k];
    if (k >= 8 && k < 13) alpha += s.density[k];
  }
  CHECK(alpha / total >= 0.95);
  // Integrated density recovers the signal variance (0.5 for a unit sine).
  CHECK(total * s.resolution_hz == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("Welch: white-noise band powers follow bandwidth") {
  const auto bands = standard_bands();
  std::vector<double> mean(bands.size(), 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = fixtures::gaussian_noise(1000, 300 + trial);
    const auto s = welch_spectrum(x, 250.0);
    for (std::size_t b = 0; b < bands.size(); ++b) mean[b] += band_power(s, bands[b]) / 100.0;
  }
  // Unit-variance white noise has one-sided density 2 / fs. Band power is the
  // mean density, so every band shows the same value; summing over the band
  // width gives power proportional to bandwidth.
  for (std::size_t b = 0; b < bands.size(); ++b) {
    CAPTURE(bands[b].name);
    CHECK(mean[b] == doctest::Approx(2.0 / 250.0).epsilon(0.2));
  }
  const double ratio = (mean[3] * 17.0) / (mean[2] * 5.0);
  CHECK(ratio == doctest::Approx(17.0 / 5.0).epsilon(0.2));
}

TEST_CASE("Welch: zero input and short input") {
  const auto s = welch_spectrum(std::vector<double>(1000, 0.0), 250.0);
  for (const auto& b : standard_bands()) CHECK(band_power(s, b) == 0.0);
  CHECK_THROWS_AS(welch_spectrum(std::vector<double>(300, 1.0), 250.0), Error);
  try {
    welch_spectrum(std::vector<double>(374, 1.0), 250.0);
    FAIL("expected SegmentTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SegmentTooShort);
  }
  CHECK_NOTHROW(welch_spectrum(std::vector<double>(375, 1.0), 250.0));
}

TEST_CASE("Welch matches a direct periodogram average") {
  const auto x = fixtures::gaussian_noise(500, 8);
  const auto s = welch_spectrum(x, 100.0);
  // Direct DFT oracle with the same segmentation (segment 100, step 50).
  const std::size_t n = 100;
  std::vector<double> w(n), ref(n / 2 + 1, 0.0);
  double wss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    wss += w[i] * w[i];
  }
  int segs = 0;
  for (std::size_t st = 0; st + n <= x.size(); st += 50, ++segs) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x[st + i] / n;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += (x[st + i] - m) * w[i] * std::polar(1.0, -2.0 * std::numbers::pi * k * i / n);
      ref[k] += std::norm(acc);
    }
  }
  CHECK(segs == 9);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double expect = ref[k] / (100.0 * wss * segs) * ((k == 0 || k == n / 2) ? 1.0 : 2.0);
    CHECK(s.density[k] == doctest::Approx(expect).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("delta PSD") {
  const auto a = fixtures::gaussian_noise(1000, 1);
  const auto b = fixtures::gaussian_noise(1000, 2);
  const auto pe = welch_psd(eeg({a, b}, {"Cz", "Pz"}, 250.0));
  const auto zero = delta_psd(pe, pe);
  for (double v : zero.power) CHECK(v == 0.0);

  PsdEstimate base = pe, ev = pe;
  std::fill(base.power.begin(), base.power.end(), 1.0);
  std::fill(ev.power.begin(), ev.power.end(), 2.0);
  for (double v : delta_psd(ev, base).power) CHECK(v == 1.0);

  PsdEstimate fewer = pe;
  fewer.channels.pop_back();
  fewer.power.resize(fewer.power.size() - 5);
  try {
    delta_psd(pe, fewer);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ShapeMismatch);
  }
}

TEST_CASE("electrode adjacency from the standard montage") {
  const auto& m = dsp::standard_montage_59();
  const auto adj = ElectrodeAdjacency::from_montage(m.names, m);
  REQUIRE(adj.size() == 59);
  CHECK(adj.connected());
  std::size_t edges = 0;
  for (std::size_t c = 0; c < adj.size(); ++c) {
    CHECK(adj.neighbours(c).size() >= 2);
    CHECK(adj.neighbours(c).size() <= 8);
    for (auto j : adj.neighbours(c)) {
      CHECK(j != c);
      const auto& back = adj.neighbours(j);
      CHECK(std::find(back.begin(), back.end(), c) != back.end());
    }
    edges += adj.neighbours(c).size();
  }
  CHECK(edges % 2 == 0);
  const auto cz = *m.index_of("Cz");
  const auto& nb = adj.neighbours(cz);
  CHECK(std::find(nb.begin(), nb.end(), *m.index_of("C1")) != nb.end());
  CHECK(std::find(nb.begin(), nb.end(), *m.index_of("Oz")) == nb.end());

  CHECK_THROWS_AS(ElectrodeAdjacency(std::vector<std::vector<std::size_t>>{{1}, {}}), Error);
  CHECK_THROWS_AS(ElectrodeAdjacency(std::vector<std::vector<std::size_t>>{{0}}), Error);
}

TEST_CASE("cluster-forming threshold") {
  CHECK(t_threshold(20, 0.05) == doctest::Approx(2.093024054).epsilon(1e-8));
  CHECK(t_threshold(10, 0.05) == doctest::Approx(2.262157163).epsilon(1e-8));
}

TEST_CASE("cluster finding") {
  const auto adj = chain(6);
  const std::vector<double> t{3.0, 2.5, -3.0, -4.0, 0.5, 5.0};
  const auto cl = find_clusters(t, 2.0, adj);
  REQUIRE(cl.size() == 3);
  CHECK(cl[0].channels == std::vector<std::size_t>{0, 1});
  CHECK(cl[0].mass == 5.5);
  CHECK(cl[1].channels == std::vector<std::size_t>{2, 3});
  CHECK(cl[1].mass == -7.0);
  CHECK(cl[2].channels == std::vector<std::size_t>{5});
}

TEST_CASE("cluster test: null data and overwhelming effect") {
  const auto adj = chain(10);
  const auto zero = cluster_permutation_test(std::vector<double>(200, 0.0), 20, adj);
  CHECK(zero.clusters.empty());
  for (double v : zero.t) CHECK(v == 0.0);

  const auto strong = normal_matrix(20, 10, 2.0, 0.1, 3);
  const auto r = cluster_permutation_test(strong, 20, adj);
  REQUIRE(r.clusters.size() == 1);
  CHECK(r.clusters[0].channels.size() == 10);
  CHECK(r.clusters[0].p <= 0.01);
  CHECK(r.n_permutations == 1000);
  double mass = 0.0;
  for (auto c : r.clusters[0].channels) mass += r.t[c];
  CHECK(r.clusters[0].mass == mass);
  for (std::size_t c = 0; c < 10; ++c) CHECK(r.cohens_d[c] == doctest::Approx(r.t[c] / std::sqrt(20.0)));
}

TEST_CASE("cluster test: errors") {
  const auto adj = chain(4);
  try {
    cluster_permutation_test(std::vector<double>(16, 1.0), 4, adj);
    FAIL("expected TooFewSubjects");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewSubjects);
  }
  try {
    cluster_permutation_test(std::vector<double>{}, 5, ElectrodeAdjacency{});
    FAIL("expected EmptyAdjacency");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyAdjacency);
  }
}

TEST_CASE("cluster test: determinism, seed sensitivity, sign-flip symmetry") {
  const auto adj = chain(10);
  auto m = normal_matrix(15, 10, 0.0, 1.0, 44);
  for (std::size_t s = 0; s < 15; ++s)
    for (std::size_t c = 3; c < 7; ++c) m[s * 10 + c] += 0.7;
  ClusterTestOptions o;
  o.seed = 9;
  const auto a = cluster_permutation_test(m, 15, adj, o);
  const auto b = cluster_permutation_test(m, 15, adj, o);
  REQUIRE(!a.clusters.empty());
  CHECK(a.clusters[0].p == b.clusters[0].p);

  auto neg = m;
  for (auto& v : neg) v = -v;
  const auto n = cluster_permutation_test(neg, 15, adj, o);
  REQUIRE(n.clusters.size() == a.clusters.size());
  for (std::size_t c = 0; c < 10; ++c) CHECK(n.t[c] == -a.t[c]);
  for (std::size_t k = 0; k < a.clusters.size(); ++k) {
    CHECK(n.clusters[k].p == a.clusters[k].p);
    CHECK(n.clusters[k].mass == -a.clusters[k].mass);
  }

  // A different seed moves p by no more than a few Monte Carlo standard errors.
  o.seed = 10;
  const auto c = cluster_permutation_test(m, 15, adj, o);
  const double p = a.clusters[0].p;
  const double se = std::sqrt(std::max(p * (1 - p), 0.01 * 0.99) / 1000.0);
  CHECK(std::abs(c.clusters[0].p - p) <= 4.0 * se);
}

TEST_CASE("cluster test: type-I error under the null") {
  const auto adj = chain(10);
  int rejections = 0;
  ClusterTestOptions o;
  o.n_permutations = 500;
  for (int rep = 0; rep < 200; ++rep) {
    o.seed = 1000 + rep;
    const auto m = normal_matrix(20, 10, 0.0, 1.0, 5000 + rep);
    const auto r = cluster_permutation_test(m, 20, adj, o);
    if (std::any_of(r.clusters.begin(), r.clusters.end(), [](const Cluster& c) { return c.p < 0.05; })) ++rejections;
  }
  CHECK(rejections / 200.0 <= 0.08);
}

namespace {

// Six-channel 10 s baseline + 20 s stimulus; events at 5 and 12 s. Alpha power
// during event windows is scaled by `alpha_gain`.
Trial alpha_trial(const std::string& pid, std::uint64_t seed, double alpha_gain) {
  const std::vector<std::string> names{"Fz", "Cz", "Pz", "C3", "C4", "Oz"};
  const double rate = 250.0;
  const std::size_t n = 30 * 250;
  std::vector<std::vector<double>> ch;
  for (std::size_t c = 0; c < names.size(); ++c) {
    auto x = fixtures::gaussian_noise(n, seed * 31 + c, 1.0);
    std::mt19937_64 rng(seed * 7 + c);
    std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
    const double phase = ph(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = i / rate;
      const double st = t - 10.0;
      const bool in_event = (st >= 3.0 && st < 7.0) || (st >= 10.0 && st < 14.0);
      const double amp = 3.0 * (in_event ? alpha_gain : 1.0);
      x[i] += amp * std::sin(2.0 * std::numbers::pi * 10.0 * t + phase);
    }
    ch.push_back(std::move(x));
  }
  Trial tr;
  tr.trial_id = pid + "-t";
  tr.participant_id = pid;
  tr.session_id = "s";
  tr.baseline_span_s = TimeSpan{0.0, 10.0};
  tr.stimulus_span_s = {10.0, 30.0};
  tr.recordings.push_back(eeg(ch, names, rate));
  tr.annotations = {{5.0, Emotion::Sadness, Intensity::High, "s", pid},
                    {12.0, Emotion::Sadness, Intensity::Medium, "s", pid},
                    {19.5, Emotion::Sadness, Intensity::Low, "s", pid}};
  return tr;
}

}  // namespace

TEST_CASE("band analysis on injected alpha desynchronisation") {
  std::vector<Trial> trials;
  for (int s = 0; s < 12; ++s) trials.push_back(alpha_trial("p" + std::to_string(s), 10 + s, 0.4));
  BandAnalysisOptions opt;
  opt.test.n_permutations = 500;
  const auto r = run_band_analysis(trials, Emotion::Sadness, opt);
  CHECK(r.subjects.size() == 12);
  CHECK(r.events_used == 24);
  CHECK(r.events_skipped == 12);
  REQUIRE(r.bands.size() == 5);
  for (const auto& b : r.bands) {
    CAPTURE(b.band.name);
    const bool sig = std::any_of(b.test.clusters.begin(), b.test.clusters.end(),
                                 [](const Cluster& c) { return c.p < 0.05; });
    if (b.band.name == "alpha") {
      CHECK(sig);
      for (double v : b.mean_delta) CHECK(v < 0.0);
    } else {
      CHECK_FALSE(sig);
    }
  }

  // Deterministic given the seed.
  const auto again = run_band_analysis(trials, Emotion::Sadness, opt);
  CHECK(again.bands[2].test.t == r.bands[2].test.t);
  CHECK(again.bands[2].test.clusters[0].p == r.bands[2].test.clusters[0].p);

  try {
    run_band_analysis(std::vector<Trial>{trials[0]}, Emotion::Sadness, opt);
    FAIL("expected InsufficientData");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientData);
  }
  CHECK_THROWS_AS(run_band_analysis(trials, Emotion::Fear, opt), Error);
}
