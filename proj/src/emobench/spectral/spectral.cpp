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

#include "emobench/spectral/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"
#include "emobench/dsp/fft.hpp"

namespace emobench::spectral {

Spectrum welch_spectrum(std::span<const double> x, double rate_hz, const WelchParams& params) {
  if (params.window != "hann") fail(Errc::InvalidSpec, "unsupported Welch window '" + params.window + "'");
  if (!(params.overlap >= 0.0 && params.overlap < 1.0)) fail(Errc::InvalidSpec, "Welch overlap must be in [0, 1)");
  const auto nseg = static_cast<std::size_t>(std::lround(params.segment_s * rate_hz));
  if (nseg < 4) fail(Errc::InvalidSpec, "Welch segment shorter than 4 samples");
  const auto step = std::max<std::size_t>(1, nseg - static_cast<std::size_t>(std::lround(params.overlap * nseg)));
  if (x.size() < nseg + step)
    fail(Errc::SegmentTooShort, "need " + std::to_string(nseg + step) + " samples for two Welch segments, got " +
                                    std::to_string(x.size()));

  // Periodic Hann, as used for spectral estimation.
  std::vector<double> w(nseg);
  double wss = 0.0;
  for (std::size_t i = 0; i < nseg; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(nseg));
    wss += w[i] * w[i];
  }

  dsp::RealFft fft(nseg);
  std::vector<double> buf(nseg);
  std::vector<std::complex<double>> spec(fft.bins());
  Spectrum out;
  out.resolution_hz = rate_hz / static_cast<double>(nseg);
  out.density.assign(fft.bins(), 0.0);
  std::size_t count = 0;
  for (std::size_t start = 0; start + nseg <= x.size(); start += step) {
    const double m = stats::mean(x.subspan(start, nseg));
    for (std::size_t i = 0; i < nseg; ++i) buf[i] = (x[start + i] - m) * w[i];
    fft.forward(buf, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) out.density[k] += std::norm(spec[k]);
    ++count;
  }
  const double scale = 1.0 / (rate_hz * wss * static_cast<double>(count));
  for (std::size_t k = 0; k < out.density.size(); ++k) {
    const bool edge = k == 0 || (nseg % 2 == 0 && k == out.density.size() - 1);
    out.density[k] *= scale * (edge ? 1.0 : 2.0);
  }
  return out;
}

double band_power(const Spectrum& s, const BandDef& band) {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < s.density.size(); ++k) {
    const double f = static_cast<double>(k) * s.resolution_hz;
    if (f >= band.low_hz - 1e-9 && f < band.high_hz - 1e-9) {
      acc += s.density[k];
      ++n;
    }
  }
  if (n == 0) fail(Errc::InvalidBand, band.name + " contains no frequency bins");
  return acc / static_cast<double>(n);
}

PsdEstimate welch_psd(const Recording& rec, const std::vector<BandDef>& bands, const WelchParams& params) {
  PsdEstimate p;
  p.channels = rec.channel_names();
  p.bands = bands;
  p.params = params;
  p.power.reserve(rec.channel_count() * bands.size());
  for (std::size_t c = 0; c < rec.channel_count(); ++c) {
    const auto s = welch_spectrum(rec.channel(c), rec.sample_rate_hz(), params);
    for (const auto& b : bands) p.power.push_back(band_power(s, b));
  }
  return p;
}

PsdEstimate delta_psd(const PsdEstimate& event, const PsdEstimate& baseline) {
  if (event.channels != baseline.channels)
    fail(Errc::ShapeMismatch, "event has " + std::to_string(event.channels.size()) + " channels, baseline " +
                                  std::to_string(baseline.channels.size()));
  if (event.bands.size() != baseline.bands.size() || event.power.size() != baseline.power.size())
    fail(Errc::ShapeMismatch, "band layouts differ");
  for (std::size_t b = 0; b < event.bands.size(); ++b)
    if (event.bands[b].name != baseline.bands[b].name) fail(Errc::ShapeMismatch, "band layouts differ");
  PsdEstimate d = event;
  for (std::size_t i = 0; i < d.power.size(); ++i) d.power[i] = event.power[i] - baseline.power[i];
  return d;
}

ElectrodeAdjacency::ElectrodeAdjacency(std::vector<std::vector<std::size_t>> neighbours)
    : neighbours_(std::move(neighbours)) {
  const auto n = neighbours_.size();
  for (std::size_t c = 0; c < n; ++c) {
    auto& nb = neighbours_[c];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (auto j : nb) {
      if (j >= n) fail(Errc::InvalidArgument, "neighbour index out of range");
      if (j == c) fail(Errc::InvalidArgument, "adjacency has a self-loop");
    }
  }
  for (std::size_t c = 0; c < n; ++c)
    for (auto j : neighbours_[c])
      if (!std::binary_search(neighbours_[j].begin(), neighbours_[j].end(), c))
        fail(Errc::InvalidArgument, "adjacency is not symmetric");
}

ElectrodeAdjacency ElectrodeAdjacency::from_positions(const std::vector<dsp::Position>& pos, double factor) {
  const auto n = pos.size();
  if (n < 2) fail(Errc::EmptyAdjacency, "need >= 2 electrodes");
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) nearest[i] = std::min(nearest[i], dsp::distance(pos[i], pos[j]));
  const double cut = factor * stats::median(nearest);
  std::vector<std::vector<std::size_t>> nb(n);
  // Sparse rows (e.g. the central row of a spherical layout) would otherwise be
  // cut off, so each electrode also reaches out to its own local spacing.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (const double d = dsp::distance(pos[i], pos[j]);
          d < cut || d < factor * nearest[i] || d < factor * nearest[j]) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }
  return ElectrodeAdjacency(std::move(nb));
}

ElectrodeAdjacency ElectrodeAdjacency::from_montage(const std::vector<std::string>& channels,
                                                    const dsp::Montage& montage) {
  return from_positions(montage.positions_for(channels));
}

bool ElectrodeAdjacency::connected() const {
  if (neighbours_.empty()) return false;
  std::vector<char> seen(neighbours_.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    for (auto j : neighbours_[c])
      if (!seen[j]) {
        seen[j] = 1;
        ++visited;
        stack.push_back(j);
      }
  }
  return visited == neighbours_.size();
}

double t_threshold(std::size_t n_subjects, double alpha) {
  if (n_subjects < 2) fail(Errc::TooFewSubjects, "t threshold needs >= 2 subjects");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidArgument, "alpha must be in (0, 1)");
  boost::math::students_t dist(static_cast<double>(n_subjects - 1));
  return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

std::vector<Cluster> find_clusters(std::span<const double> t, double threshold, const ElectrodeAdjacency& adj) {
  if (adj.size() != t.size()) fail(Errc::DimensionMismatch, "adjacency does not cover every channel");
  std::vector<Cluster> out;
  std::vector<char> seen(t.size(), 0);
  for (std::size_t s = 0; s < t.size(); ++s) {
    if (seen[s] || !(std::abs(t[s]) > threshold)) continue;
    const bool positive = t[s] > 0.0;
    Cluster c;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto k = stack.back();
      stack.pop_back();
      c.channels.push_back(k);
      for (auto j : adj.neighbours(k))
        if (!seen[j] && std::abs(t[j]) > threshold && (t[j] > 0.0) == positive) {
          seen[j] = 1;
          stack.push_back(j);
        }
    }
    std::sort(c.channels.begin(), c.channels.end());
    for (auto k : c.channels) c.mass += t[k];
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

double t_value(double sum, double sumsq, std::size_t n) {
  const auto dn = static_cast<double>(n);
  const double m = sum / dn;
  const double var = std::max(0.0, (sumsq - dn * m * m) / (dn - 1.0));
  const double sd = std::sqrt(var);
  if (sd <= 1e-300 || sd <= 1e-12 * std::abs(m)) {
    if (m == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), m);
  }
  return m / (sd / std::sqrt(dn));
}

double max_abs_mass(const std::vector<Cluster>& clusters) {
  double best = 0.0;
  for (const auto& c : clusters) best = std::max(best, std::abs(c.mass));
  return best;
}

}  // namespace

ClusterTestResult cluster_permutation_test(std::span<const double> deltas, std::size_t n_subjects,
                                           const ElectrodeAdjacency& adjacency, const ClusterTestOptions& options) {
  if (n_subjects < 5) fail(Errc::TooFewSubjects, "cluster test needs >= 5 subjects, got " + std::to_string(n_subjects));
  if (adjacency.size() == 0) fail(Errc::EmptyAdjacency, "no channels in adjacency");
  const std::size_t n_ch = adjacency.size();
  if (deltas.size() != n_subjects * n_ch) fail(Errc::DimensionMismatch, "deltas are not subjects x channels");
  for (double v : deltas)
    if (!std::isfinite(v)) fail(Errc::InvalidArgument, "non-finite delta");

  ClusterTestResult r;
  r.n_subjects = n_subjects;
  r.n_permutations = options.n_permutations;
  r.alpha = options.alpha;
  r.seed = options.seed;
  r.threshold = t_threshold(n_subjects, options.alpha);

  std::vector<double> sumsq(n_ch, 0.0), sum(n_ch, 0.0);
  for (std::size_t s = 0; s < n_subjects; ++s)
    for (std::size_t c = 0; c < n_ch; ++c) {
      const double v = deltas[s * n_ch + c];
      sum[c] += v;
      sumsq[c] += v * v;
    }
  r.t.resize(n_ch);
  r.cohens_d.resize(n_ch);
  for (std::size_t c = 0; c < n_ch; ++c) {
    r.t[c] = t_value(sum[c], sumsq[c], n_subjects);
    const double sd =
        std::sqrt(std::max(0.0, (sumsq[c] - sum[c] * sum[c] / n_subjects) / static_cast<double>(n_subjects - 1)));
    const double m = sum[c] / static_cast<double>(n_subjects);
    r.cohens_d[c] = sd > 0.0 ? m / sd : (m == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m));
  }
  r.clusters = find_clusters(r.t, r.threshold, adjacency);
  if (r.clusters.empty() || options.n_permutations == 0) return r;

  // Sign flips leave the sum of squares untouched; only the sums change.
  // Each permutation draws from its own stream so the null is order independent.
  std::vector<double> null_max(options.n_permutations);
  std::vector<double> flipped(n_ch), tp(n_ch);
  std::vector<char> sign(n_subjects);
  const auto lo = static_cast<std::uint32_t>(options.seed), hi = static_cast<std::uint32_t>(options.seed >> 32);
  for (std::size_t k = 0; k < options.n_permutations; ++k) {
    std::seed_seq seq{lo, hi, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    std::uint64_t bits = 0;
    for (std::size_t s = 0; s < n_subjects; ++s) {
      if (s % 64 == 0) bits = rng();
      sign[s] = static_cast<char>(bits & 1u);
      bits >>= 1;
    }
    std::fill(flipped.begin(), flipped.end(), 0.0);
    for (std::size_t s = 0; s < n_subjects; ++s) {
      const double g = sign[s] ? -1.0 : 1.0;
      const double* row = deltas.data() + s * n_ch;
      for (std::size_t c = 0; c < n_ch; ++c) flipped[c] += g * row[c];
    }
    for (std::size_t c = 0; c < n_ch; ++c) tp[c] = t_value(flipped[c], sumsq[c], n_subjects);
    null_max[k] = max_abs_mass(find_clusters(tp, r.threshold, adjacency));
  }
  for (auto& c : r.clusters) {
    const double obs = std::abs(c.mass);
    const auto ge = std::count_if(null_max.begin(), null_max.end(), [&](double m) { return m >= obs; });
    c.p = static_cast<double>(1 + ge) / static_cast<double>(1 + options.n_permutations);
  }
  return r;
}

BandAnalysis run_band_analysis(std::span<const Trial> trials, Emotion emotion, const BandAnalysisOptions& options,
                               const dsp::Montage& montage) {
  BandAnalysis out;
  out.emotion = emotion;
  const std::size_t nb = options.bands.size();
  // subject -> (sum of delta power, event count)
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> acc;
  for (const auto& t : trials) {
    std::optional<PsdEstimate> base;
    for (const auto& a : t.annotations) {
      if (a.label != emotion) continue;
      Epoch ep;
      try {
        ep = extract_epoch(t, a, {options.half_width_s, 0.0, {Modality::EEG}});
      } catch (const Error& e) {
        if (e.code() != Errc::WindowOutOfBounds) throw;
        ++out.events_skipped;
        continue;
      }
      if (!base) {
        const auto baseline = extract_baseline(t);
        const auto it = std::find_if(baseline.begin(), baseline.end(),
                                     [](const Recording& r) { return r.modality() == Modality::EEG; });
        if (it == baseline.end()) fail(Errc::MissingModality, t.trial_id + ": no EEG baseline");
        base = welch_psd(*it, options.bands, options.welch);
      }
      const auto d = delta_psd(welch_psd(*ep.find(Modality::EEG), options.bands, options.welch), *base);
      if (out.channels.empty()) out.channels = d.channels;
      if (d.channels != out.channels) fail(Errc::ShapeMismatch, t.trial_id + ": EEG channel layout differs");
      auto& slot = acc[t.participant_id];
      if (slot.first.empty()) slot.first.assign(d.power.size(), 0.0);
      for (std::size_t i = 0; i < d.power.size(); ++i) slot.first[i] += d.power[i];
      ++slot.second;
      ++out.events_used;
    }
  }
  if (acc.size() < 5)
    fail(Errc::InsufficientData, std::string(to_string(emotion)) + ": " + std::to_string(acc.size()) +
                                     " subjects with events, need >= 5");

  const auto adjacency = ElectrodeAdjacency::from_montage(out.channels, montage);
  const std::size_t n_ch = out.channels.size();
  const std::size_t n_sub = acc.size();
  for (auto& [pid, slot] : acc) {
    out.subjects.push_back(pid);
    for (auto& v : slot.first) v /= static_cast<double>(slot.second);
  }
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<double> m(n_sub * n_ch);
    std::size_t s = 0;
    for (const auto& [pid, slot] : acc) {
      for (std::size_t c = 0; c < n_ch; ++c) m[s * n_ch + c] = slot.first[c * nb + b];
      ++s;
    }
    BandResult br;
    br.band = options.bands[b];
    br.mean_delta.assign(n_ch, 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) br.mean_delta[i % n_ch] += m[i] / static_cast<double>(n_sub);
    br.test = cluster_permutation_test(m, n_sub, adjacency, options.test);
    out.bands.push_back(std::move(br));
  }
  return out;
}

}  // namespace emobench::spectral
