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

#ifndef EMOBENCH_DSP_RESAMPLE_HPP
#define EMOBENCH_DSP_RESAMPLE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "emobench/core/model.hpp"

namespace emobench::dsp {

struct Ratio {
  std::int64_t up = 1;
  std::int64_t down = 1;
};

/// target/source as a reduced fraction with denominator <= 10000, or IrrationalRatio.
Ratio rational_ratio(double target_hz, double source_hz);

/// Polyphase rational resampling with a Kaiser-windowed sinc anti-alias filter.
/// Output length is round(n * up / down).
std::vector<double> resample_poly(std::span<const double> x, Ratio ratio);

Recording resample(const Recording& recording, double target_hz);

}  // namespace emobench::dsp

#endif
