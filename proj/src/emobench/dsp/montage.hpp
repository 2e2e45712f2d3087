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

#ifndef EMOBENCH_DSP_MONTAGE_HPP
#define EMOBENCH_DSP_MONTAGE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace emobench::dsp {

using Position = std::array<double, 3>;

// Electrode positions on the unit sphere: +x right, +y nose, +z vertex.
struct Montage {
  std::vector<std::string> names;
  std::vector<Position> positions;

  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Positions reordered to follow `channel_names`; MissingMontage if any name is unknown.
  std::vector<Position> positions_for(const std::vector<std::string>& channel_names) const;
};

/// 59-electrode subset of the 10-10 system on an idealised spherical head.
const Montage& standard_montage_59();

double distance(const Position& a, const Position& b);

}  // namespace emobench::dsp

#endif
