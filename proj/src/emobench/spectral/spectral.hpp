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

#ifndef EMOBENCH_SPECTRAL_SPECTRAL_HPP
#define EMOBENCH_SPECTRAL_SPECTRAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emobench/core/bands.hpp"
#include "emobench/core/model.hpp"
#include "emobench/dsp/montage.hpp"

namespace emobench::spectral {

struct WelchParams {
  double segment_s = 1.0;
  double overlap = 0.5;
  std::string window = "hann";
};

/// One-sided density spectrum (units^2 / Hz) of a single channel.
struct Spectrum {
  double resolution_hz = 0.0;
  std::vector<double> density;  // bin k at k * resolution_hz
};

Spectrum welch_spectrum(std::span<const double> x, double rate_hz, const WelchParams& params = {});

/// Mean density over bins whose frequency lies in [low, high).
double band_power(const Spectrum& s, const BandDef& band);

struct PsdEstimate {
  std::vector<std::string> channels;
  std::vector<BandDef> bands;
  std::vector<double> power;  // channel-major: channel * bands + band
  WelchParams params;

  double at(std::size_t channel, std::size_t band) const { return power[channel * bands.size() + band]; }
};

/// SegmentTooShort unless the input spans at least two Welch segments.
PsdEstimate welch_psd(const Recording& rec, const std::vector<BandDef>& bands = standard_bands(),
                      const WelchParams& params = {});

/// Element-wise event minus baseline; ShapeMismatch on differing layouts.
PsdEstimate delta_psd(const PsdEstimate& event, const PsdEstimate& baseline);

class ElectrodeAdjacency {
 public:
  ElectrodeAdjacency() = default;
  explicit ElectrodeAdjacency(std::vector<std::vector<std::size_t>> neighbours);

  /// Neighbours closer than `factor` times the median nearest-neighbour distance,
  /// or than `factor` times either electrode's own nearest-neighbour distance.
  static ElectrodeAdjacency from_positions(const std::vector<dsp::Position>& positions, double factor = 1.25);
  static ElectrodeAdjacency from_montage(const std::vector<std::string>& channels,
                                         const dsp::Montage& montage = dsp::standard_montage_59());

  std::size_t size() const noexcept { return neighbours_.size(); }
  const std::vector<std::size_t>& neighbours(std::size_t c) const { return neighbours_.at(c); }
  bool connected() const;

 private:
  std::vector<std::vector<std::size_t>> neighbours_;
};

struct Cluster {
  std::vector<std::size_t> channels;
  double mass = 0.0;  // sum of member t-values
  double p = 1.0;
};

struct ClusterTestResult {
  std::vector<double> t;
  std::vector<double> cohens_d;
  std::vector<Cluster> clusters;
  double threshold = 0.0;
  std::size_t n_subjects = 0;
  std::size_t n_permutations = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct ClusterTestOptions {
  std::size_t n_permutations = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
};

/// One-sample t per channel (students_t df = n - 1), then sign-consistent
/// connected clusters scored against the sign-flip max-mass null.
/// `deltas` is subjects x channels, row-major.
ClusterTestResult cluster_permutation_test(std::span<const double> deltas, std::size_t n_subjects,
                                           const ElectrodeAdjacency& adjacency, const ClusterTestOptions& options = {});

/// Suprathreshold clusters of a t-map (exposed for testing).
std::vector<Cluster> find_clusters(std::span<const double> t, double threshold, const ElectrodeAdjacency& adjacency);

/// Two-tailed cluster-forming threshold.
double t_threshold(std::size_t n_subjects, double alpha);

struct BandResult {
  BandDef band;
  std::vector<double> mean_delta;  // per channel, across subjects
  ClusterTestResult test;
};

struct BandAnalysis {
  Emotion emotion = Emotion::Happiness;
  std::vector<std::string> channels;
  std::vector<std::string> subjects;
  std::size_t events_used = 0;
  std::size_t events_skipped = 0;  // windows outside the stimulus
  std::vector<BandResult> bands;
};

struct BandAnalysisOptions {
  std::vector<BandDef> bands = standard_bands();
  WelchParams welch;
  ClusterTestOptions test;
  double half_width_s = 2.0;
};

/// Event-window minus baseline power per event, averaged per subject, then
/// tested across subjects for every band. Trials should already be preprocessed.
BandAnalysis run_band_analysis(std::span<const Trial> trials, Emotion emotion, const BandAnalysisOptions& options = {},
                               const dsp::Montage& montage = dsp::standard_montage_59());

}  // namespace emobench::spectral

#endif
