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

#ifndef EMOBENCH_DSP_CHANNELS_HPP
#define EMOBENCH_DSP_CHANNELS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "emobench/core/model.hpp"
#include "emobench/dsp/montage.hpp"

namespace emobench::dsp {

inline constexpr double kBadChannelVarianceRatio = 10.0;

struct BadChannelReport {
  std::vector<double> variances;
  double median_variance = 0.0;
  std::vector<std::size_t> flagged;  // ascending
  std::string repair_method = "inverse-distance-weighting";
};

/// Flags channels whose variance exceeds 10x the median channel variance.
BadChannelReport detect_bad_channels(const Recording& recording);

/// Interpolation weights for one repaired channel over the good channels;
/// normalised inverse squared distance.
std::vector<double> idw_weights(const Position& target, const std::vector<Position>& sources);

/// Replaces flagged channels by an inverse-distance-weighted average of good channels.
Recording repair_channels(const Recording& recording, const BadChannelReport& report,
                          const std::vector<Position>& positions);
Recording repair_channels(const Recording& recording, const BadChannelReport& report, const Montage& montage);

struct SampleSpan {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
  bool operator==(const SampleSpan&) const = default;
};

/// Contiguous spans where any channel exceeds +/- threshold.
std::vector<SampleSpan> amplitude_reject(const Recording& recording, double threshold);

bool overlaps_any(const std::vector<SampleSpan>& mask, std::size_t first, std::size_t count);

}  // namespace emobench::dsp

#endif
