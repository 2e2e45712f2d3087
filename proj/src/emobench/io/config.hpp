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

#ifndef EMOBENCH_IO_CONFIG_HPP
#define EMOBENCH_IO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "emobench/dsp/preprocess.hpp"
#include "emobench/harness/harness.hpp"
#include "emobench/spectral/spectral.hpp"
#include "emobench/synth/synth.hpp"

namespace emobench::io {

struct ScrOptions {
  double threshold_uS = 0.05;
  double horizon_s = 2.0;
  double window_s = 4.0;  // concordance window
};

struct PsdOptions {
  std::vector<Emotion> emotions{kAllEmotions.begin(), kAllEmotions.end()};
  spectral::BandAnalysisOptions analysis;
};

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path catalog;     // stimulus catalog JSON
  std::filesystem::path media_dir;   // served under /media
  std::filesystem::path state_dir = "annotator-state";
  std::filesystem::path corpus_dir;  // optional: confirmed annotations appended here
};

struct PipelineConfig {
  synth::SynthSpec synth = synth::discriminative_spec();
  dsp::PreprocessConfig preprocess;
  harness::LabelingStrategy labeling;  // strategy used by the `epoch` and `features` commands
  harness::BenchmarkConfig bench;
  PsdOptions psd;
  ScrOptions scr;
  ServeConfig serve;
};

/// Unknown keys and wrong types raise InvalidArgument naming the key path.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& file);
nlohmann::json config_to_json(const PipelineConfig& c);

/// `--seed` drives every stochastic stage.
void apply_seed(PipelineConfig& c, std::uint64_t seed);

dsp::FilterSpec filter_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json filter_to_json(const dsp::FilterSpec& f);
harness::FeatureSelection selection_from_name(const std::string& name);

}  // namespace emobench::io

#endif
