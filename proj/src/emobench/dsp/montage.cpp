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

#include "emobench/dsp/montage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "emobench/core/error.hpp"

namespace emobench::dsp {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Position normalise(Position p) {
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return {p[0] / n, p[1] / n, p[2] / n};
}

Position slerp(const Position& a, const Position& b, double t) {
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double omega = std::acos(std::clamp(dot, -1.0, 1.0));
  if (omega < 1e-12) return a;
  const double wa = std::sin((1.0 - t) * omega) / std::sin(omega);
  const double wb = std::sin(t * omega) / std::sin(omega);
  return normalise({wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]});
}

// Row index runs +4 (frontal pole) .. -4 (occipital). Each row is an arc from
// its midline electrode to an equatorial end point; column k in 0..4 sits at
// fraction k/4 along that arc.
Position place(int row, int column_magnitude, bool right) {
  const double theta = std::abs(row) * 22.5 * kDeg;
  const double sign = row >= 0 ? 1.0 : -1.0;
  const Position midline{0.0, sign * std::sin(theta), std::cos(theta)};
  const double azimuth = (90.0 - row * 18.0) * kDeg;
  const Position end{(right ? 1.0 : -1.0) * std::sin(azimuth), std::cos(azimuth), 0.0};
  return slerp(midline, end, column_magnitude / 4.0);
}

Position position_from_label(const std::string& label) {
  static const std::pair<const char*, int> prefixes[] = {{"Fp", 4}, {"AF", 3}, {"FC", 1}, {"FT", 1}, {"CP", -1},
                                                         {"TP", -1}, {"PO", -3}, {"F", 2}, {"C", 0}, {"T", 0},
                                                         {"P", -2}, {"O", -4}};
  for (const auto& [prefix, row] : prefixes) {
    const std::string p(prefix);
    if (label.rfind(p, 0) != 0) continue;
    const std::string rest = label.substr(p.size());
    if (rest == "z") return place(row, 0, false);
    const int number = std::stoi(rest);
    int k = (number + 1) / 2;
    // Pole rows hold a single lateral electrode at the arc end.
    if (row == 4 || row == -4) k = 4;
    if (p == "T" || p == "FT" || p == "TP") k = 4;
    return place(row, k, number % 2 == 0);
  }
  fail(Errc::InvalidArgument, "unrecognised 10-10 label " + label);
}

}  // namespace

std::optional<std::size_t> Montage::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::vector<Position> Montage::positions_for(const std::vector<std::string>& channel_names) const {
  std::vector<Position> out;
  out.reserve(channel_names.size());
  for (const auto& name : channel_names) {
    const auto idx = index_of(name);
    if (!idx) fail(Errc::MissingMontage, "no montage position for channel " + name);
    out.push_back(positions[*idx]);
  }
  return out;
}

const Montage& standard_montage_59() {
  static const Montage montage = [] {
    Montage m;
    m.names = {"Fp1", "Fp2", "AF7", "AF3", "AF4", "AF8", "F7",  "F5",  "F3",  "F1",  "Fz",  "F2",
               "F4",  "F6",  "F8",  "FT7", "FC5", "FC3", "FC1", "FCz", "FC2", "FC4", "FC6", "FT8",
               "T7",  "C5",  "C3",  "C1",  "Cz",  "C2",  "C4",  "C6",  "T8",  "TP7", "CP5", "CP3",
               "CP1", "CPz", "CP2", "CP4", "CP6", "TP8", "P7",  "P5",  "P3",  "P1",  "Pz",  "P2",
               "P4",  "P6",  "P8",  "PO7", "PO3", "POz", "PO4", "PO8", "O1",  "Oz",  "O2"};
    for (const auto& n : m.names) m.positions.push_back(position_from_label(n));
    return m;
  }();
  return montage;
}

double distance(const Position& a, const Position& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace emobench::dsp
