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

#ifndef EMOBENCH_IO_REPORT_HPP
#define EMOBENCH_IO_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "emobench/features/features.hpp"
#include "emobench/harness/harness.hpp"
#include "emobench/scr/scr.hpp"
#include "emobench/spectral/spectral.hpp"

namespace emobench::io {

nlohmann::json metrics_to_json(const harness::Metrics& m);
nlohmann::json confusion_to_json(const harness::Confusion& c);
nlohmann::json bench_report_to_json(const harness::BenchmarkReport& r);

/// One row per (strategy, classifier, features); cells read "mean ± SD" over folds.
std::string bench_table_csv(const harness::BenchmarkReport& r);

nlohmann::json band_analysis_to_json(const spectral::BandAnalysis& a);
nlohmann::json emotion_percentages_to_json(const scr::EmotionPercentages& p);
nlohmann::json consistency_to_json(const scr::ConsistencyStats& c);

/// Header: epoch_id,participant_id,label,<feature names...>
std::string features_csv(const std::vector<features::FeatureVector>& rows, const std::vector<std::string>& eeg_channels,
                         const std::vector<BandDef>& bands);

/// Fixed two-decimal rendering used by the CSV tables.
std::string mean_sd(const harness::Summary& s);

}  // namespace emobench::io

#endif
