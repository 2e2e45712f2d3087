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

#ifndef EMOBENCH_CORE_BANDS_HPP
#define EMOBENCH_CORE_BANDS_HPP

#include <string>
#include <vector>

namespace emobench {

struct BandDef {
  std::string name;
  double low_hz = 0.0;
  double high_hz = 0.0;
};

/// delta 1-4, theta 4-8, alpha 8-13, beta 13-30, gamma 30-45 Hz.
inline std::vector<BandDef> standard_bands() {
  return {{"delta", 1.0, 4.0}, {"theta", 4.0, 8.0}, {"alpha", 8.0, 13.0}, {"beta", 13.0, 30.0}, {"gamma", 30.0, 45.0}};
}

}  // namespace emobench

#endif
