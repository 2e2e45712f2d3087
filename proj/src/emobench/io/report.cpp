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

#include "emobench/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "emobench/core/error.hpp"

namespace emobench::io {

using nlohmann::json;

namespace {

json summary_json(const harness::Summary& s) { return {{"mean", s.mean}, {"sd", s.sd}}; }

// Shortest round-trip text for doubles keeps the CSV lossless and stable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string mean_sd(const harness::Summary& s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", s.mean, s.sd);
  return buf;
}

json confusion_to_json(const harness::Confusion& c) {
  json rows = json::array();
  for (const auto& r : c) rows.push_back(r);
  std::vector<std::string> labels;
  for (auto e : kAllEmotions) labels.emplace_back(to_string(e));
  return {{"labels", labels}, {"rows_true_cols_pred", rows}};
}

json metrics_to_json(const harness::Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"confusion", confusion_to_json(m.confusion)}};
}

json bench_report_to_json(const harness::BenchmarkReport& r) {
  json datasets = json::array();
  for (const auto& d : r.datasets) {
    json per;
    for (auto e : kAllEmotions) per[std::string(to_string(e))] = d.per_class[class_index(e)];
    datasets.push_back({{"strategy", std::string(harness::to_string(d.strategy))},
                        {"windows", d.windows},
                        {"skipped", d.skipped},
                        {"per_class", per}});
  }
  json cells = json::array();
  for (const auto& c : r.cells) {
    json folds = json::array();
    for (const auto& f : c.folds)
      folds.push_back({{"held_out", f.held_out},
                       {"n_train", f.n_train},
                       {"n_test", f.n_test},
                       {"metrics", metrics_to_json(f.metrics)},
                       {"train_mean_checksum", f.train_mean_checksum}});
    json per;
    for (auto e : kAllEmotions) per[std::string(to_string(e))] = c.per_emotion_accuracy[class_index(e)];
    cells.push_back({{"strategy", std::string(harness::to_string(c.strategy))},
                     {"classifier", c.classifier},
                     {"features", c.selection.name()},
                     {"accuracy", summary_json(c.accuracy)},
                     {"precision", summary_json(c.precision)},
                     {"recall", summary_json(c.recall)},
                     {"f1", summary_json(c.f1)},
                     {"per_emotion_accuracy", per},
                     {"pooled_confusion", confusion_to_json(c.pooled)},
                     {"folds", folds}});
  }
  json imp = json::array();
  for (const auto& i : r.improvements)
    imp.push_back({{"classifier", i.classifier},
                   {"features", i.selection.name()},
                   {"accuracy_points", i.accuracy},
                   {"f1_points", i.f1}});
  return {{"seed", r.seed},
          {"subjects", r.subjects},
          {"source_crc32", r.source_crc32},
          {"datasets", datasets},
          {"cells", cells},
          {"fine_minus_whole", imp}};
}

std::string bench_table_csv(const harness::BenchmarkReport& r) {
  std::ostringstream os;
  os << "strategy,classifier,features,accuracy,precision,recall,f1\n";
  for (const auto& c : r.cells)
    os << harness::to_string(c.strategy) << ',' << c.classifier << ',' << c.selection.name() << ','
       << mean_sd(c.accuracy) << ',' << mean_sd(c.precision) << ',' << mean_sd(c.recall) << ',' << mean_sd(c.f1)
       << '\n';
  return os.str();
}

json band_analysis_to_json(const spectral::BandAnalysis& a) {
  json bands = json::array();
  for (const auto& b : a.bands) {
    json clusters = json::array();
    for (const auto& c : b.test.clusters) {
      std::vector<std::string> names;
      for (auto ch : c.channels) names.push_back(a.channels.at(ch));
      clusters.push_back({{"channels", names}, {"mass", c.mass}, {"p", c.p}, {"significant", c.p < b.test.alpha}});
    }
    // Infinite t (zero-spread channels) is not representable in JSON.
    json t = json::array();
    for (double v : b.test.t) t.push_back(std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf"));
    json d = json::array();
    for (double v : b.test.cohens_d) d.push_back(std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf"));
    bands.push_back({{"band", b.band.name},
                     {"low_hz", b.band.low_hz},
                     {"high_hz", b.band.high_hz},
                     {"mean_delta_psd", b.mean_delta},
                     {"t", t},
                     {"cohens_d", d},
                     {"threshold", b.test.threshold},
                     {"n_permutations", b.test.n_permutations},
                     {"clusters", clusters}});
  }
  return {{"emotion", std::string(to_string(a.emotion))},
          {"channels", a.channels},
          {"subjects", a.subjects},
          {"events_used", a.events_used},
          {"events_skipped", a.events_skipped},
          {"bands", bands}};
}

json emotion_percentages_to_json(const scr::EmotionPercentages& p) {
  json table = json::array();
  for (auto e : kAllEmotions) {
    const auto k = class_index(e);
    table.push_back({{"emotion", std::string(to_string(e))},
                     {"arousal", is_high_arousal(e) ? "high" : "low"},
                     {"events", p.events[k]},
                     {"present", static_cast<bool>(p.present[k])},
                     {"gsr_increase_percent", p.present[k] ? json(p.percent[k]) : json(nullptr)}});
  }
  return {{"per_emotion", table},
          {"high_arousal_mean_percent", p.contrast.high_mean},
          {"low_arousal_mean_percent", p.contrast.low_mean}};
}

json consistency_to_json(const scr::ConsistencyStats& c) {
  auto g = [](const scr::GroupStats& s) { return json{{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"cv", s.cv}}; };
  const auto inf_safe = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
  return {{"a", g(c.a)},
          {"b", g(c.b)},
          {"levene",
           {{"f", inf_safe(c.levene.f)},
            {"p", c.levene.p},
            {"df_between", c.levene.df_between},
            {"df_within", c.levene.df_within},
            {"degenerate", c.levene.degenerate}}}};
}

std::string features_csv(const std::vector<features::FeatureVector>& rows, const std::vector<std::string>& eeg_channels,
                         const std::vector<BandDef>& bands) {
  const auto names = features::feature_names(eeg_channels, bands);
  std::ostringstream os;
  os << "epoch_id,participant_id,label";
  for (const auto& n : names) os << ',' << csv_field(n);
  os << '\n';
  for (const auto& r : rows) {
    if (r.eeg_de.size() + 3 != names.size()) fail(Errc::ShapeMismatch, "feature row does not match header");
    os << csv_field(r.epoch_id) << ',' << csv_field(r.participant_id) << ',' << to_string(r.label);
    for (double v : r.eeg_de) os << ',' << num(v);
    os << ',' << num(r.gsr_skewness) << ',' << num(r.ecg_rmssd) << ',' << num(r.ppg_delta_pwa) << '\n';
  }
  return os.str();
}

}  // namespace emobench::io
