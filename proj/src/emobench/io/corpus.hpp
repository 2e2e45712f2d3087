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

#ifndef EMOBENCH_IO_CORPUS_HPP
#define EMOBENCH_IO_CORPUS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "emobench/core/model.hpp"
#include "emobench/synth/synth.hpp"

namespace emobench::io {

inline constexpr int kCorpusFormatVersion = 1;
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kAnnotationsFile = "annotations.jsonl";
inline constexpr const char* kGroundTruthFile = "ground_truth.json";

// On-disk layout:
//   manifest.json       trials, recording metadata, crc32 of every data file
//   data/NNNN_<MOD>.bin little-endian float32, channel-major
//   annotations.jsonl   one annotation per line
//   ground_truth.json   optional synthgen sidecar
// Samples are stored as float32; values already representable in float32
// (synthgen output) round-trip exactly.

void write_corpus(std::span<const Trial> trials, const std::filesystem::path& dir,
                  const synth::GroundTruth* truth = nullptr, bool preprocessed = false);

/// Manifest "stage" is "preprocessed" (written by the preprocess command).
bool corpus_preprocessed(const std::filesystem::path& dir);

/// Verifies format version and checksums before decoding any samples.
std::vector<Trial> read_corpus(const std::filesystem::path& dir);

std::optional<synth::GroundTruth> read_ground_truth(const std::filesystem::path& dir);

// One annotations.jsonl line. `trial_id` may be empty, in which case the
// reader resolves the trial by (participant_id, stimulus_id).
struct AnnotationRecord {
  std::string trial_id;
  std::string stimulus_id;
  EmotionAnnotation annotation;
};

nlohmann::json annotation_to_json(const AnnotationRecord& r);
AnnotationRecord annotation_from_json(const nlohmann::json& j);

/// Appends one record and flushes; the file is created if missing.
void append_annotation(const std::filesystem::path& file, const AnnotationRecord& r);

nlohmann::json ground_truth_to_json(const synth::GroundTruth& t);
synth::GroundTruth ground_truth_from_json(const nlohmann::json& j);

}  // namespace emobench::io

#endif
