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

#include "emobench/pipeline/pipeline.hpp"

#include <cmath>
#include <fstream>

#include "emobench/core/error.hpp"
#include "emobench/dsp/preprocess.hpp"
#include "emobench/features/features.hpp"
#include "emobench/io/corpus.hpp"
#include "emobench/io/report.hpp"
#include "emobench/scr/scr.hpp"
#include "emobench/spectral/spectral.hpp"

namespace emobench::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + p.string());
  out << text;
  if (!out) fail(Errc::Io, "short write to " + p.string());
}

const fs::path& require_out(const Path& out, const char* command) {
  if (!out) fail(Errc::InvalidArgument, std::string(command) + " needs --out");
  return *out;
}

void make_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) fail(Errc::Io, "cannot create " + p.string() + ": " + ec.message());
}

// The parts of the configuration that determine analysis results.
json analysis_config(const io::PipelineConfig& c) {
  auto j = io::config_to_json(c);
  j.erase("serve");
  return j;
}

json corpus_summary(const CorpusData& d) {
  std::vector<std::string> subjects;
  for (const auto& t : d.trials)
    if (subjects.empty() || subjects.back() != t.participant_id) subjects.push_back(t.participant_id);
  std::size_t annotations = 0;
  for (const auto& t : d.trials) annotations += t.annotations.size();
  return {{"trials", d.trials.size()},
          {"participants", subjects.size()},
          {"annotations", annotations},
          {"preprocessed", d.preprocessed},
          {"ground_truth", d.truth.has_value()},
          {"source_crc32", harness::source_checksum(d.trials)}};
}

const Recording& gsr_of(const Trial& t) {
  const auto* r = t.find(Modality::GSR);
  if (!r) fail(Errc::MissingModality, "trial " + t.trial_id + " has no GSR");
  return *r;
}

}  // namespace

CorpusData load_or_generate(const io::PipelineConfig& config, const Path& in) {
  CorpusData d;
  if (in) {
    d.trials = io::read_corpus(*in);
    d.truth = io::read_ground_truth(*in);
    d.preprocessed = io::corpus_preprocessed(*in);
  } else {
    auto corpus = synth::generate_corpus(config.synth);
    d.trials = std::move(corpus.trials);
    d.truth = std::move(corpus.truth);
  }
  if (d.trials.empty()) fail(Errc::InsufficientData, "corpus has no trials");
  return d;
}

void ensure_preprocessed(CorpusData& data, const io::PipelineConfig& config) {
  if (data.preprocessed) return;
  for (auto& t : data.trials) t = dsp::preprocess_trial(t, config.preprocess).trial;
  data.preprocessed = true;
}

json run_synth(const io::PipelineConfig& config, const Path& out) {
  const auto& dir = require_out(out, "synth");
  const auto corpus = synth::generate_corpus(config.synth);
  io::write_corpus(corpus.trials, dir, &corpus.truth);
  CorpusData d{corpus.trials, corpus.truth, false};
  return {{"command", "synth"},
          {"corpus", corpus_summary(d)},
          {"injected_scrs", corpus.truth.scrs.size()},
          {"injected_band_effects", corpus.truth.band_effects.size()},
          {"config", analysis_config(config)}};
}

json run_preprocess(const io::PipelineConfig& config, const Path& in, const Path& out) {
  const auto& dir = require_out(out, "preprocess");
  auto d = load_or_generate(config, in);
  if (d.preprocessed) fail(Errc::InvalidArgument, "corpus is already preprocessed");
  json reports = json::array();
  for (auto& t : d.trials) {
    auto p = dsp::preprocess_trial(t, config.preprocess);
    json jr{{"trial_id", t.trial_id}};
    if (p.report.bad_channels) {
      const auto* eeg = p.trial.find(Modality::EEG);
      std::vector<std::string> names;
      for (auto c : p.report.bad_channels->flagged) names.push_back(eeg->channel_names().at(c));
      jr["bad_channels"] = names;
      jr["repair_method"] = p.report.bad_channels->repair_method;
    }
    json spans = json::array();
    for (const auto& s : p.report.rejected) spans.push_back({s.first, s.last});
    jr["rejected_eeg_spans"] = spans;
    reports.push_back(std::move(jr));
    t = std::move(p.trial);
  }
  d.preprocessed = true;
  io::write_corpus(d.trials, dir, d.truth ? &*d.truth : nullptr, true);
  return {{"command", "preprocess"}, {"corpus", corpus_summary(d)}, {"trials", reports},
          {"config", analysis_config(config)}};
}

json run_epoch(const io::PipelineConfig& config, const Path& in) {
  auto d = load_or_generate(config, in);
  ensure_preprocessed(d, config);
  const auto ds = harness::build_dataset(d.trials, config.labeling);
  json windows = json::array();
  for (const auto& e : ds.windows)
    windows.push_back({{"epoch_id", features::epoch_id(e)},
                       {"trial_id", e.provenance.trial_id},
                       {"participant_id", e.provenance.participant_id},
                       {"label", std::string(to_string(e.annotation.label))},
                       {"intensity", std::string(to_string(e.annotation.intensity))},
                       {"start_s", e.window_span_s.start_s},
                       {"end_s", e.window_span_s.end_s},
                       {"shift_s", e.provenance.shift_offset_s}});
  return {{"command", "epoch"},
          {"strategy", std::string(harness::to_string(config.labeling.kind))},
          {"corpus", corpus_summary(d)},
          {"skipped", ds.skipped},
          {"windows", windows}};
}

json run_features(const io::PipelineConfig& config, const Path& in, const Path& out) {
  auto d = load_or_generate(config, in);
  ensure_preprocessed(d, config);
  const auto ds = harness::build_dataset(d.trials, config.labeling);
  const auto rows = harness::extract_all(ds);
  const auto* eeg = d.trials.front().find(Modality::EEG);
  if (!eeg) fail(Errc::MissingModality, "first trial has no EEG");
  const auto csv = io::features_csv(rows, eeg->channel_names(), standard_bands());
  if (out) {
    make_dir(*out);
    write_text(*out / "features.csv", csv);
  }
  return {{"command", "features"},
          {"strategy", std::string(harness::to_string(config.labeling.kind))},
          {"corpus", corpus_summary(d)},
          {"rows", rows.size()},
          {"columns", features::feature_names(eeg->channel_names(), standard_bands()).size() + 3},
          {"skipped", ds.skipped}};
}

json run_validate_psd(const io::PipelineConfig& config, const Path& in) {
  auto d = load_or_generate(config, in);
  ensure_preprocessed(d, config);
  json analyses = json::array();
  for (auto e : config.psd.emotions) {
    auto j = io::band_analysis_to_json(spectral::run_band_analysis(d.trials, e, config.psd.analysis));
    if (d.truth) {
      json injected = json::array();
      std::vector<std::pair<std::string, std::vector<std::string>>> seen;
      for (const auto& b : d.truth->band_effects) {
        if (b.emotion != e) continue;
        std::pair<std::string, std::vector<std::string>> key{b.band, b.channels};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        injected.push_back({{"band", b.band}, {"channels", b.channels}, {"gain", b.gain}});
      }
      j["injected"] = injected;
    }
    analyses.push_back(std::move(j));
  }
  return {{"command", "validate-psd"}, {"corpus", corpus_summary(d)}, {"analyses", analyses},
          {"config", analysis_config(config)}};
}

json run_validate_scr(const io::PipelineConfig& config, const Path& in) {
  auto d = load_or_generate(config, in);
  ensure_preprocessed(d, config);
  const auto& o = config.scr;
  const auto pct = scr::gsr_increase_by_emotion(d.trials, o.threshold_uS, o.horizon_s);
  json report{{"command", "validate-scr"},
              {"corpus", corpus_summary(d)},
              {"threshold_uS", o.threshold_uS},
              {"horizon_s", o.horizon_s},
              {"gsr_increase", io::emotion_percentages_to_json(pct)}};
  try {
    report["concordance"] = scr::scr_concordance(d.trials, o.window_s, o.threshold_uS);
  } catch (const Error& e) {
    if (e.code() != Errc::EmptyEventSet) throw;
    report["concordance"] = nullptr;
  }

  if (d.truth) {
    // Detection quality against the injected responses, and false positives
    // on the response-free baseline segments.
    std::size_t injected = 0, matched = 0;
    double fp_windows = 0.0, fp_hits = 0.0;
    for (const auto& t : d.trials) {
      const auto& g = gsr_of(t);
      const double offset = t.stimulus_span_s.start_s - g.start_time_s();
      std::vector<double> onsets;
      for (const auto& s : d.truth->scrs)
        if (s.trial_id == t.trial_id) onsets.push_back(s.onset_s + offset);
      const auto detected = scr::detect_scr(g.channel(0), g.sample_rate_hz());
      const auto score = scr::score_scr_detection(detected, onsets, 1.0, o.threshold_uS);
      injected += score.injected;
      matched += score.matched;
      if (t.baseline_span_s) {
        const auto base = extract_baseline(t);
        for (const auto& r : base) {
          if (r.modality() != Modality::GSR) continue;
          const auto n = std::floor(r.duration_s() / o.window_s + 1e-9);
          if (n < 1) continue;
          fp_hits += scr::scr_false_positive_rate(r.channel(0), r.sample_rate_hz(), o.window_s, o.threshold_uS) * n;
          fp_windows += n;
        }
      }
    }
    report["detection"] = {{"injected", injected},
                           {"matched", matched},
                           {"recall", injected ? json(static_cast<double>(matched) / injected) : json(nullptr)},
                           {"baseline_windows", fp_windows},
                           {"baseline_false_positive_rate", fp_windows > 0 ? json(fp_hits / fp_windows) : json(nullptr)}};
  }
  return report;
}

json run_compare_paradigms(const io::PipelineConfig& config, const Path& in) {
  auto d = load_or_generate(config, in);
  if (!d.truth)
    fail(Errc::InsufficientData, "compare-paradigms needs ground_truth.json with both annotation paradigms");
  ensure_preprocessed(d, config);
  synth::SynthCorpus sc{d.trials, *d.truth};
  const auto delayed = synth::with_delayed_annotations(sc);

  std::vector<double> r_imm, r_del;
  double err_imm = 0.0, err_del = 0.0;
  for (const auto& e : d.truth->events) {
    r_imm.push_back(e.rating_immediate);
    r_del.push_back(e.rating_delayed);
    err_imm += std::abs(e.t_immediate_s - e.t_true_s);
    err_del += std::abs(e.t_delayed_s - e.t_true_s);
  }
  const double n = static_cast<double>(d.truth->events.size());
  const auto& o = config.scr;
  return {{"command", "compare-paradigms"},
          {"corpus", corpus_summary(d)},
          {"window_s", o.window_s},
          {"threshold_uS", o.threshold_uS},
          {"immediate",
           {{"scr_concordance", scr::scr_concordance(d.trials, o.window_s, o.threshold_uS)},
            {"mean_abs_timing_error_s", err_imm / n}}},
          {"delayed",
           {{"scr_concordance", scr::scr_concordance(delayed, o.window_s, o.threshold_uS)},
            {"mean_abs_timing_error_s", err_del / n}}},
          {"ratings", io::consistency_to_json(scr::consistency_stats(r_imm, r_del))},
          {"ratings_groups", {{"a", "immediate"}, {"b", "delayed"}}}};
}

harness::BenchmarkReport run_bench(const io::PipelineConfig& config, const Path& in) {
  auto d = load_or_generate(config, in);
  ensure_preprocessed(d, config);
  return harness::run_benchmark(d.trials, config.bench);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"synth",        "preprocess",   "epoch",
                                              "features",     "validate-psd", "validate-scr",
                                              "compare-paradigms", "bench",   "serve"};
  return names;
}

json run_command(const std::string& name, const io::PipelineConfig& config, const Path& in, const Path& out) {
  json report;
  if (name == "synth") report = run_synth(config, out);
  else if (name == "preprocess") report = run_preprocess(config, in, out);
  else if (name == "epoch") report = run_epoch(config, in);
  else if (name == "features") report = run_features(config, in, out);
  else if (name == "validate-psd") report = run_validate_psd(config, in);
  else if (name == "validate-scr") report = run_validate_scr(config, in);
  else if (name == "compare-paradigms") report = run_compare_paradigms(config, in);
  else if (name == "bench") {
    const auto r = run_bench(config, in);
    report = io::bench_report_to_json(r);
    report["config"] = analysis_config(config);
    if (out) {
      make_dir(*out);
      write_text(*out / "bench_table.csv", io::bench_table_csv(r));
    }
  } else {
    fail(Errc::InvalidArgument, "unknown command '" + name + "'");
  }
  if (out) {
    make_dir(*out);
    write_text(*out / (name + ".json"), report.dump(1) + "\n");
  }
  return report;
}

}  // namespace emobench::pipeline
