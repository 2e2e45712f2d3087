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

#include "emobench/io/config.hpp"

#include <fstream>
#include <set>

#include "emobench/core/error.hpp"

namespace emobench::io {

using nlohmann::json;

namespace {

// Reads optional fields of one JSON object and rejects keys nobody asked for.
class Obj {
 public:
  Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail(Errc::InvalidArgument, "config: '" + where_ + "' must be an object");
  }

  bool has(const char* key) {
    known_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const char* key) {
    known_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

  template <typename T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(Errc::InvalidArgument, "config: bad value for '" + path(key) + "'");
    }
  }

  template <typename T>
  void get_opt(const char* key, std::optional<T>& out) {
    if (!has(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!known_.count(it.key())) fail(Errc::InvalidArgument, "config: unknown key '" + path(it.key().c_str()) + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> known_;
};

Emotion emotion_of(const std::string& s, const std::string& where) {
  const auto e = parse_emotion(s);
  if (!e) fail(Errc::InvalidArgument, "config: unknown emotion '" + s + "' in " + where);
  return *e;
}

std::vector<BandDef> bands_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) fail(Errc::InvalidArgument, "config: '" + where + "' must be an array");
  std::vector<BandDef> out;
  for (const auto& b : j) {
    Obj o(b, where + "[]");
    BandDef d;
    o.get("name", d.name);
    o.get("low_hz", d.low_hz);
    o.get("high_hz", d.high_hz);
    o.finish();
    if (d.name.empty() || !(d.high_hz > d.low_hz) || !(d.low_hz > 0))
      fail(Errc::InvalidBand, "config: band '" + d.name + "' in " + where);
    out.push_back(d);
  }
  return out;
}

json bands_to_json(const std::vector<BandDef>& bands) {
  json a = json::array();
  for (const auto& b : bands) a.push_back({{"name", b.name}, {"low_hz", b.low_hz}, {"high_hz", b.high_hz}});
  return a;
}

void read_synth(const json& j, synth::SynthSpec& s) {
  Obj o(j, "synth");
  if (o.has("preset")) {
    std::string preset;
    o.get("preset", preset);
    if (preset == "discriminative") s = synth::discriminative_spec(s.seed);
    else if (preset == "null") s = synth::null_spec(s.seed);
    else if (preset == "plain") s = synth::SynthSpec{};
    else fail(Errc::InvalidArgument, "config: unknown synth preset '" + preset + "'");
  }
  o.get("n_subjects", s.n_subjects);
  o.get("trials_per_subject", s.trials_per_subject);
  o.get("stimulus_s", s.stimulus_s);
  o.get("baseline_s", s.baseline_s);
  o.get("events_per_trial", s.events_per_trial);
  o.get("event_margin_s", s.event_margin_s);
  o.get("event_spacing_s", s.event_spacing_s);
  o.get("eeg_channels", s.eeg_channels);
  o.get("eeg_rate_hz", s.eeg_rate_hz);
  o.get("ecg_rate_hz", s.ecg_rate_hz);
  o.get("gsr_rate_hz", s.gsr_rate_hz);
  o.get("ppg_rate_hz", s.ppg_rate_hz);
  o.get("band_rms_uV", s.band_rms_uV);
  o.get("posterior_alpha_boost", s.posterior_alpha_boost);
  o.get("subject_gain_sd", s.subject_gain_sd);
  o.get("eeg_noise_uV", s.eeg_noise_uV);
  o.get("line_noise_uV", s.line_noise_uV);
  if (o.has("effects")) {
    const auto& arr = o.raw("effects");
    if (!arr.is_array()) fail(Errc::InvalidArgument, "config: 'synth.effects' must be an array");
    s.effects.clear();
    for (const auto& e : arr) {
      Obj eo(e, "synth.effects[]");
      synth::BandEffect b;
      std::string emotion = std::string(to_string(b.emotion));
      eo.get("emotion", emotion);
      b.emotion = emotion_of(emotion, "synth.effects");
      eo.get("band", b.band);
      eo.get("region", b.region);
      eo.get("channels", b.channels);
      eo.get("gain", b.gain);
      eo.finish();
      s.effects.push_back(b);
    }
  }
  if (o.has("scr")) {
    const auto& js = o.raw("scr");
    if (js.is_null()) {
      s.scr.reset();
    } else {
      synth::ScrPolicy p = s.scr.value_or(synth::ScrPolicy{});
      Obj so(js, "synth.scr");
      so.get("high_arousal_only", p.high_arousal_only);
      so.get("probability", p.probability);
      so.get("amplitude_min_uS", p.amplitude_min_uS);
      so.get("amplitude_max_uS", p.amplitude_max_uS);
      so.get("latency_min_s", p.latency_min_s);
      so.get("latency_max_s", p.latency_max_s);
      so.get("spontaneous_per_min", p.spontaneous_per_min);
      so.finish();
      s.scr = p;
    }
  }
  o.get("gsr_tonic_min_uS", s.gsr_tonic_min_uS);
  o.get("gsr_tonic_max_uS", s.gsr_tonic_max_uS);
  o.get("gsr_slope_uS_per_s", s.gsr_slope_uS_per_s);
  o.get("gsr_noise_uS", s.gsr_noise_uS);
  o.get("rr_mean_min_s", s.rr_mean_min_s);
  o.get("rr_mean_max_s", s.rr_mean_max_s);
  o.get("rr_jitter_s", s.rr_jitter_s);
  o.get("rr_event_scale", s.rr_event_scale);
  o.get("pwa_event_slope", s.pwa_event_slope);
  o.get("pwa_noise", s.pwa_noise);
  o.get("ecg_noise_uV", s.ecg_noise_uV);
  o.get("ppg_noise", s.ppg_noise);
  o.get("immediate_jitter_s", s.immediate_jitter_s);
  o.get("delayed_jitter_s", s.delayed_jitter_s);
  o.get("immediate_rating_mean", s.immediate_rating_mean);
  o.get("immediate_rating_sd", s.immediate_rating_sd);
  o.get("delayed_rating_mean", s.delayed_rating_mean);
  o.get("delayed_rating_sd", s.delayed_rating_sd);
  o.get("seed", s.seed);
  o.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    fail(Errc::InvalidArgument, std::string("config: synth: ") + e.what());
  }
}

json synth_to_json(const synth::SynthSpec& s) {
  json effects = json::array();
  for (const auto& e : s.effects)
    effects.push_back({{"emotion", std::string(to_string(e.emotion))},
                       {"band", e.band},
                       {"region", e.region},
                       {"channels", e.channels},
                       {"gain", e.gain}});
  json scr = nullptr;
  if (s.scr)
    scr = {{"high_arousal_only", s.scr->high_arousal_only},   {"probability", s.scr->probability},
           {"amplitude_min_uS", s.scr->amplitude_min_uS},     {"amplitude_max_uS", s.scr->amplitude_max_uS},
           {"latency_min_s", s.scr->latency_min_s},           {"latency_max_s", s.scr->latency_max_s},
           {"spontaneous_per_min", s.scr->spontaneous_per_min}};
  return {{"n_subjects", s.n_subjects},
          {"trials_per_subject", s.trials_per_subject},
          {"stimulus_s", s.stimulus_s},
          {"baseline_s", s.baseline_s},
          {"events_per_trial", s.events_per_trial},
          {"event_margin_s", s.event_margin_s},
          {"event_spacing_s", s.event_spacing_s},
          {"eeg_channels", s.eeg_channels},
          {"eeg_rate_hz", s.eeg_rate_hz},
          {"ecg_rate_hz", s.ecg_rate_hz},
          {"gsr_rate_hz", s.gsr_rate_hz},
          {"ppg_rate_hz", s.ppg_rate_hz},
          {"band_rms_uV", s.band_rms_uV},
          {"posterior_alpha_boost", s.posterior_alpha_boost},
          {"subject_gain_sd", s.subject_gain_sd},
          {"eeg_noise_uV", s.eeg_noise_uV},
          {"line_noise_uV", s.line_noise_uV},
          {"effects", effects},
          {"scr", scr},
          {"gsr_tonic_min_uS", s.gsr_tonic_min_uS},
          {"gsr_tonic_max_uS", s.gsr_tonic_max_uS},
          {"gsr_slope_uS_per_s", s.gsr_slope_uS_per_s},
          {"gsr_noise_uS", s.gsr_noise_uS},
          {"rr_mean_min_s", s.rr_mean_min_s},
          {"rr_mean_max_s", s.rr_mean_max_s},
          {"rr_jitter_s", s.rr_jitter_s},
          {"rr_event_scale", s.rr_event_scale},
          {"pwa_event_slope", s.pwa_event_slope},
          {"pwa_noise", s.pwa_noise},
          {"ecg_noise_uV", s.ecg_noise_uV},
          {"ppg_noise", s.ppg_noise},
          {"immediate_jitter_s", s.immediate_jitter_s},
          {"delayed_jitter_s", s.delayed_jitter_s},
          {"immediate_rating_mean", s.immediate_rating_mean},
          {"immediate_rating_sd", s.immediate_rating_sd},
          {"delayed_rating_mean", s.delayed_rating_mean},
          {"delayed_rating_sd", s.delayed_rating_sd},
          {"seed", s.seed}};
}

void read_filter(Obj& o, const char* key, std::optional<dsp::FilterSpec>& out) {
  if (!o.has(key)) return;
  const auto& j = o.raw(key);
  if (j.is_null()) out.reset();
  else out = filter_from_json(j, o.path(key));
}

void read_preprocess(const json& j, dsp::PreprocessConfig& p) {
  Obj o(j, "preprocess");
  o.get_opt("eeg_target_hz", p.eeg_target_hz);
  read_filter(o, "eeg_bandpass", p.eeg_bandpass);
  read_filter(o, "eeg_notch", p.eeg_notch);
  o.get("repair_bad_channels", p.repair_bad_channels);
  o.get_opt("reject_threshold_uv", p.reject_threshold_uv);
  read_filter(o, "ecg_filter", p.ecg_filter);
  read_filter(o, "gsr_filter", p.gsr_filter);
  read_filter(o, "ppg_filter", p.ppg_filter);
  o.finish();
}

json opt_filter(const std::optional<dsp::FilterSpec>& f) { return f ? filter_to_json(*f) : json(nullptr); }

void read_labeling(const json& j, harness::LabelingStrategy& s, const std::string& where) {
  Obj o(j, where);
  if (o.has("strategy")) {
    std::string k;
    o.get("strategy", k);
    if (k == "fine") s.kind = harness::StrategyKind::Fine;
    else if (k == "whole") s.kind = harness::StrategyKind::Whole;
    else fail(Errc::InvalidArgument, "config: unknown labeling strategy '" + k + "'");
  }
  o.get("window_s", s.window_s);
  o.get("fine_shifts_s", s.fine_shifts_s);
  o.get("whole_step_s", s.whole_step_s);
  o.finish();
  if (!(s.window_s > 0) || !(s.whole_step_s > 0))
    fail(Errc::InvalidArgument, "config: " + where + " window and step must be positive");
}

json labeling_to_json(const harness::LabelingStrategy& s) {
  return {{"strategy", std::string(harness::to_string(s.kind))},
          {"window_s", s.window_s},
          {"fine_shifts_s", s.fine_shifts_s},
          {"whole_step_s", s.whole_step_s}};
}

void read_mlp(const json& j, harness::MlpConfig& m) {
  Obj o(j, "bench.mlp");
  o.get("hidden", m.hidden);
  o.get("dropout", m.dropout);
  o.get("learning_rate", m.learning_rate);
  o.get("epochs", m.epochs);
  o.get("batch_size", m.batch_size);
  o.get("seed", m.seed);
  o.get("max_restarts", m.max_restarts);
  o.finish();
  if (m.hidden.empty() || m.epochs < 1 || m.batch_size < 1 || !(m.dropout >= 0 && m.dropout < 1) ||
      !(m.learning_rate > 0))
    fail(Errc::InvalidArgument, "config: bench.mlp has an out-of-range value");
  for (int h : m.hidden)
    if (h < 1) fail(Errc::InvalidArgument, "config: bench.mlp.hidden sizes must be positive");
}

void read_bench(const json& j, harness::BenchmarkConfig& b) {
  Obj o(j, "bench");
  if (o.has("strategies")) {
    const auto& arr = o.raw("strategies");
    if (!arr.is_array() || arr.empty()) fail(Errc::InvalidArgument, "config: bench.strategies must be a non-empty array");
    b.strategies.clear();
    for (const auto& s : arr) {
      harness::LabelingStrategy ls;
      if (s.is_string()) {
        read_labeling(json{{"strategy", s}}, ls, "bench.strategies[]");
      } else {
        read_labeling(s, ls, "bench.strategies[]");
      }
      b.strategies.push_back(ls);
    }
  }
  o.get("classifiers", b.classifiers);
  for (const auto& c : b.classifiers)
    if (c != "knn" && c != "mlp") fail(Errc::InvalidArgument, "config: unknown classifier '" + c + "'");
  if (o.has("selections")) {
    std::vector<std::string> names;
    o.get("selections", names);
    b.selections.clear();
    for (const auto& n : names) b.selections.push_back(selection_from_name(n));
  }
  o.get("knn_k", b.knn_k);
  if (b.knn_k == 0) fail(Errc::InvalidArgument, "config: bench.knn_k must be >= 1");
  if (o.has("mlp")) read_mlp(o.raw("mlp"), b.mlp);
  o.get("seed", b.seed);
  o.finish();
}

json bench_to_json(const harness::BenchmarkConfig& b) {
  json strategies = json::array();
  for (const auto& s : b.strategies) strategies.push_back(labeling_to_json(s));
  std::vector<std::string> sel;
  for (const auto& s : b.selections) sel.push_back(s.name());
  return {{"strategies", strategies},
          {"classifiers", b.classifiers},
          {"selections", sel},
          {"knn_k", b.knn_k},
          {"mlp",
           {{"hidden", b.mlp.hidden},
            {"dropout", b.mlp.dropout},
            {"learning_rate", b.mlp.learning_rate},
            {"epochs", b.mlp.epochs},
            {"batch_size", b.mlp.batch_size},
            {"seed", b.mlp.seed},
            {"max_restarts", b.mlp.max_restarts}}},
          {"seed", b.seed}};
}

void read_psd(const json& j, PsdOptions& p) {
  Obj o(j, "psd");
  if (o.has("emotions")) {
    std::vector<std::string> names;
    o.get("emotions", names);
    p.emotions.clear();
    for (const auto& n : names) p.emotions.push_back(emotion_of(n, "psd.emotions"));
  }
  if (o.has("bands")) p.analysis.bands = bands_from_json(o.raw("bands"), "psd.bands");
  if (o.has("welch")) {
    Obj w(o.raw("welch"), "psd.welch");
    w.get("segment_s", p.analysis.welch.segment_s);
    w.get("overlap", p.analysis.welch.overlap);
    w.get("window", p.analysis.welch.window);
    w.finish();
  }
  o.get("n_permutations", p.analysis.test.n_permutations);
  o.get("alpha", p.analysis.test.alpha);
  o.get("seed", p.analysis.test.seed);
  o.get("half_width_s", p.analysis.half_width_s);
  o.finish();
  if (p.analysis.test.n_permutations == 0 || !(p.analysis.test.alpha > 0 && p.analysis.test.alpha < 1))
    fail(Errc::InvalidArgument, "config: psd permutation settings out of range");
}

json psd_to_json(const PsdOptions& p) {
  std::vector<std::string> em;
  for (auto e : p.emotions) em.emplace_back(to_string(e));
  return {{"emotions", em},
          {"bands", bands_to_json(p.analysis.bands)},
          {"welch",
           {{"segment_s", p.analysis.welch.segment_s},
            {"overlap", p.analysis.welch.overlap},
            {"window", p.analysis.welch.window}}},
          {"n_permutations", p.analysis.test.n_permutations},
          {"alpha", p.analysis.test.alpha},
          {"seed", p.analysis.test.seed},
          {"half_width_s", p.analysis.half_width_s}};
}

}  // namespace

dsp::FilterSpec filter_from_json(const json& j, const std::string& where) {
  Obj o(j, where);
  std::string kind;
  o.get("kind", kind);
  dsp::FilterSpec f;
  if (kind == "fir-bandpass") f = dsp::FilterSpec::fir_bandpass(0, 0);
  else if (kind == "notch") f = dsp::FilterSpec::notch(0);
  else if (kind == "butterworth-bandpass") f = dsp::FilterSpec::butterworth_bandpass(0, 0);
  else if (kind == "butterworth-lowpass") f = dsp::FilterSpec::butterworth_lowpass(0);
  else fail(Errc::InvalidArgument, "config: '" + where + ".kind' must name a filter kind");
  o.get("low_hz", f.low_hz);
  o.get("high_hz", f.high_hz);
  o.get("order", f.order);
  o.get("transition_hz", f.transition_hz);
  o.get("notch_q", f.notch_q);
  o.finish();
  return f;
}

json filter_to_json(const dsp::FilterSpec& f) {
  return {{"kind", std::string(dsp::to_string(f.kind))}, {"low_hz", f.low_hz},   {"high_hz", f.high_hz},
          {"order", f.order},                            {"transition_hz", f.transition_hz}, {"notch_q", f.notch_q}};
}

harness::FeatureSelection selection_from_name(const std::string& name) {
  harness::FeatureSelection s;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= name.size()) {
    const auto next = name.find('+', pos);
    const auto part = name.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (first) {
      if (part != "EEG") fail(Errc::InvalidArgument, "config: feature selection must start with EEG: '" + name + "'");
      first = false;
    } else if (part == "GSR") {
      s.gsr = true;
    } else if (part == "ECG") {
      s.ecg = true;
    } else if (part == "PPG") {
      s.ppg = true;
    } else {
      fail(Errc::InvalidArgument, "config: unknown modality '" + part + "' in selection '" + name + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return s;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  Obj o(j, "");
  if (o.has("synth")) read_synth(o.raw("synth"), c.synth);
  if (o.has("preprocess")) read_preprocess(o.raw("preprocess"), c.preprocess);
  if (o.has("labeling")) read_labeling(o.raw("labeling"), c.labeling, "labeling");
  if (o.has("bench")) read_bench(o.raw("bench"), c.bench);
  if (o.has("psd")) read_psd(o.raw("psd"), c.psd);
  if (o.has("scr")) {
    Obj s(o.raw("scr"), "scr");
    s.get("threshold_uS", c.scr.threshold_uS);
    s.get("horizon_s", c.scr.horizon_s);
    s.get("window_s", c.scr.window_s);
    s.finish();
  }
  if (o.has("serve")) {
    Obj s(o.raw("serve"), "serve");
    std::string catalog, media, state, corpus;
    s.get("host", c.serve.host);
    s.get("port", c.serve.port);
    s.get("catalog", catalog);
    s.get("media_dir", media);
    s.get("state_dir", state);
    s.get("corpus_dir", corpus);
    s.finish();
    if (!catalog.empty()) c.serve.catalog = catalog;
    if (!media.empty()) c.serve.media_dir = media;
    if (!state.empty()) c.serve.state_dir = state;
    if (!corpus.empty()) c.serve.corpus_dir = corpus;
    if (c.serve.port < 0 || c.serve.port > 65535) fail(Errc::InvalidArgument, "config: serve.port out of range");
  }
  o.finish();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(Errc::InvalidArgument, "cannot read config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::InvalidArgument, "config " + file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const PipelineConfig& c) {
  return {{"synth", synth_to_json(c.synth)},
          {"preprocess",
           {{"eeg_target_hz", c.preprocess.eeg_target_hz ? json(*c.preprocess.eeg_target_hz) : json(nullptr)},
            {"eeg_bandpass", opt_filter(c.preprocess.eeg_bandpass)},
            {"eeg_notch", opt_filter(c.preprocess.eeg_notch)},
            {"repair_bad_channels", c.preprocess.repair_bad_channels},
            {"reject_threshold_uv",
             c.preprocess.reject_threshold_uv ? json(*c.preprocess.reject_threshold_uv) : json(nullptr)},
            {"ecg_filter", opt_filter(c.preprocess.ecg_filter)},
            {"gsr_filter", opt_filter(c.preprocess.gsr_filter)},
            {"ppg_filter", opt_filter(c.preprocess.ppg_filter)}}},
          {"labeling", labeling_to_json(c.labeling)},
          {"bench", bench_to_json(c.bench)},
          {"psd", psd_to_json(c.psd)},
          {"scr", {{"threshold_uS", c.scr.threshold_uS}, {"horizon_s", c.scr.horizon_s}, {"window_s", c.scr.window_s}}},
          {"serve",
           {{"host", c.serve.host},
            {"port", c.serve.port},
            {"catalog", c.serve.catalog.string()},
            {"media_dir", c.serve.media_dir.string()},
            {"state_dir", c.serve.state_dir.string()},
            {"corpus_dir", c.serve.corpus_dir.string()}}}};
}

void apply_seed(PipelineConfig& c, std::uint64_t seed) {
  c.synth.seed = seed;
  c.bench.seed = seed;
  c.bench.mlp.seed = seed;
  c.psd.analysis.test.seed = seed;
}

}  // namespace emobench::io
