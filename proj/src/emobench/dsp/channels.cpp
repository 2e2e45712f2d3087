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

#include "emobench/dsp/channels.hpp"

#include <algorithm>
#include <cmath>

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"

namespace emobench::dsp {

BadChannelReport detect_bad_channels(const Recording& recording) {
  if (recording.channel_count() < 3) fail(Errc::TooFewChannels, "bad-channel detection needs >= 3 channels");
  BadChannelReport report;
  for (std::size_t c = 0; c < recording.channel_count(); ++c)
    report.variances.push_back(stats::variance_population(recording.channel(c)));
  report.median_variance = stats::median(report.variances);
  for (std::size_t c = 0; c < report.variances.size(); ++c)
    if (report.variances[c] > kBadChannelVarianceRatio * report.median_variance) report.flagged.push_back(c);
  return report;
}

std::vector<double> idw_weights(const Position& target, const std::vector<Position>& sources) {
  std::vector<double> w(sources.size(), 0.0);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double d = distance(target, sources[i]);
    if (d < 1e-12) {
      // Coincident electrode: copy it.
      std::fill(w.begin(), w.end(), 0.0);
      w[i] = 1.0;
      return w;
    }
    w[i] = 1.0 / (d * d);
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

Recording repair_channels(const Recording& recording, const BadChannelReport& report,
                          const std::vector<Position>& positions) {
  if (report.flagged.empty()) return recording;
  if (positions.size() != recording.channel_count())
    fail(Errc::MissingMontage, "montage does not cover every channel");
  std::vector<bool> bad(recording.channel_count(), false);
  for (auto c : report.flagged) {
    if (c >= bad.size()) fail(Errc::InvalidArgument, "flagged channel index out of range");
    bad[c] = true;
  }
  std::vector<std::size_t> good;
  std::vector<Position> good_pos;
  for (std::size_t c = 0; c < bad.size(); ++c)
    if (!bad[c]) {
      good.push_back(c);
      good_pos.push_back(positions[c]);
    }
  if (good.empty()) fail(Errc::AllChannelsBad, "every channel is flagged bad");

  std::vector<double> samples = recording.samples();
  const std::size_t n = recording.sample_count();
  for (auto c : report.flagged) {
    const auto w = idw_weights(positions[c], good_pos);
    double* dst = samples.data() + c * n;
    std::fill(dst, dst + n, 0.0);
    for (std::size_t g = 0; g < good.size(); ++g) {
      const auto src = recording.channel(good[g]);
      for (std::size_t t = 0; t < n; ++t) dst[t] += w[g] * src[t];
    }
  }
  return recording.with_samples(std::move(samples));
}

Recording repair_channels(const Recording& recording, const BadChannelReport& report, const Montage& montage) {
  if (report.flagged.empty()) return recording;
  return repair_channels(recording, report, montage.positions_for(recording.channel_names()));
}

std::vector<SampleSpan> amplitude_reject(const Recording& recording, double threshold) {
  if (!(threshold > 0.0)) fail(Errc::InvalidArgument, "rejection threshold must be positive");
  const std::size_t n = recording.sample_count();
  std::vector<bool> hit(n, false);
  for (std::size_t c = 0; c < recording.channel_count(); ++c) {
    const auto ch = recording.channel(c);
    for (std::size_t t = 0; t < n; ++t)
      if (std::abs(ch[t]) > threshold) hit[t] = true;
  }
  std::vector<SampleSpan> spans;
  for (std::size_t t = 0; t < n; ++t) {
    if (!hit[t]) continue;
    std::size_t end = t;
    while (end < n && hit[end]) ++end;
    spans.push_back({t, end});
    t = end;
  }
  return spans;
}

bool overlaps_any(const std::vector<SampleSpan>& mask, std::size_t first, std::size_t count) {
  return std::any_of(mask.begin(), mask.end(),
                     [&](const SampleSpan& s) { return s.first < first + count && first < s.last; });
}

}  // namespace emobench::dsp
