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

#ifndef EMOBENCH_PIPELINE_PIPELINE_HPP
#define EMOBENCH_PIPELINE_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "emobench/core/model.hpp"
#include "emobench/harness/harness.hpp"
#include "emobench/io/config.hpp"
#include "emobench/synth/synth.hpp"

namespace emobench::pipeline {

struct CorpusData {
  std::vector<Trial> trials;
  std::optional<synth::GroundTruth> truth;
  bool preprocessed = false;
};

/// Reads `in` when given, otherwise synthesizes a corpus from the config.
CorpusData load_or_generate(const io::PipelineConfig& config, const std::optional<std::filesystem::path>& in);
void ensure_preprocessed(CorpusData& data, const io::PipelineConfig& config);

// Each command returns its report. Commands that produce files write them
// under `out`; `synth` and `preprocess` require it.
using Path = std::optional<std::filesystem::path>;

nlohmann::json run_synth(const io::PipelineConfig& config, const Path& out);
nlohmann::json run_preprocess(const io::PipelineConfig& config, const Path& in, const Path& out);
nlohmann::json run_epoch(const io::PipelineConfig& config, const Path& in);
nlohmann::json run_features(const io::PipelineConfig& config, const Path& in, const Path& out);
nlohmann::json run_validate_psd(const io::PipelineConfig& config, const Path& in);
nlohmann::json run_validate_scr(const io::PipelineConfig& config, const Path& in);
nlohmann::json run_compare_paradigms(const io::PipelineConfig& config, const Path& in);
harness::BenchmarkReport run_bench(const io::PipelineConfig& config, const Path& in);

/// Dispatch by command name; also writes `<out>/<name>.json` (and the bench
/// table CSV) when `out` is given. InvalidArgument for unknown names.
nlohmann::json run_command(const std::string& name, const io::PipelineConfig& config, const Path& in, const Path& out);

const std::vector<std::string>& command_names();

}  // namespace emobench::pipeline

#endif
