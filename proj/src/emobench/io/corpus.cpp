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

#include "emobench/io/corpus.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <zlib.h>

#include "emobench/core/error.hpp"

namespace emobench::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint32_t crc_of(const std::vector<unsigned char>& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // crc32 takes a uInt length; feed large buffers in chunks.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    crc = crc32(crc, bytes.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<unsigned char> encode_f32le(const std::vector<double>& samples) {
  std::vector<unsigned char> out(samples.size() * 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto u = std::bit_cast<std::uint32_t>(static_cast<float>(samples[i]));
    for (int b = 0; b < 4; ++b) out[4 * i + b] = static_cast<unsigned char>((u >> (8 * b)) & 0xffu);
  }
  return out;
}

std::vector<double> decode_f32le(const std::vector<unsigned char>& bytes) {
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[4 * i + b]) << (8 * b);
    out[i] = static_cast<double>(std::bit_cast<float>(u));
  }
  return out;
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(Errc::Io, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + p.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::Io, "short write to " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) fail(Errc::Io, "cannot write " + p.string());
  out << text;
}

json span_json(const TimeSpan& s) { return json::array({s.start_s, s.end_s}); }

// Field access that turns json type errors into MalformedManifest.
template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::MalformedManifest, where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(Errc::MalformedManifest, where + ": bad type for '" + key + "'");
  }
}

TimeSpan span_field(const json& j, const char* key, const std::string& where) {
  const auto v = field<std::vector<double>>(j, key, where);
  if (v.size() != 2 || !(v[1] >= v[0])) fail(Errc::MalformedManifest, where + ": '" + key + "' must be [start, end]");
  return {v[0], v[1]};
}

std::string data_file_name(std::size_t trial_index, Modality m) {
  std::ostringstream os;
  os << "data/";
  os.width(4);
  os.fill('0');
  os << trial_index << '_' << to_string(m) << ".bin";
  return os.str();
}

}  // namespace

json annotation_to_json(const AnnotationRecord& r) {
  const auto& a = r.annotation;
  json j;
  if (!r.trial_id.empty()) j["trial_id"] = r.trial_id;
  j["participant_id"] = a.participant_id;
  j["session_id"] = a.session_id;
  if (!r.stimulus_id.empty()) j["stimulus_id"] = r.stimulus_id;
  j["t_event_s"] = a.t_event_s;
  j["label"] = std::string(to_string(a.label));
  j["intensity"] = std::string(to_string(a.intensity));
  return j;
}

AnnotationRecord annotation_from_json(const json& j) {
  const std::string where = "annotation";
  AnnotationRecord r;
  if (j.contains("trial_id")) r.trial_id = field<std::string>(j, "trial_id", where);
  if (j.contains("stimulus_id")) r.stimulus_id = field<std::string>(j, "stimulus_id", where);
  if (r.trial_id.empty() && r.stimulus_id.empty())
    fail(Errc::MalformedManifest, "annotation needs trial_id or stimulus_id");
  auto& a = r.annotation;
  a.participant_id = field<std::string>(j, "participant_id", where);
  if (j.contains("session_id")) a.session_id = field<std::string>(j, "session_id", where);
  a.t_event_s = field<double>(j, "t_event_s", where);
  const auto label = parse_emotion(field<std::string>(j, "label", where));
  const auto intensity = parse_intensity(field<std::string>(j, "intensity", where));
  if (!label) fail(Errc::MalformedManifest, "annotation: unknown label");
  if (!intensity) fail(Errc::MalformedManifest, "annotation: unknown intensity");
  a.label = *label;
  a.intensity = *intensity;
  return r;
}

void append_annotation(const fs::path& file, const AnnotationRecord& r) {
  std::ofstream out(file, std::ios::app);
  if (!out) fail(Errc::Io, "cannot append to " + file.string());
  out << annotation_to_json(r).dump() << '\n';
  out.flush();
  if (!out) fail(Errc::Io, "short write to " + file.string());
}

void write_corpus(std::span<const Trial> trials, const fs::path& dir, const synth::GroundTruth* truth,
                  bool preprocessed) {
  std::error_code ec;
  fs::create_directories(dir / "data", ec);
  if (ec) fail(Errc::Io, "cannot create " + (dir / "data").string() + ": " + ec.message());

  json manifest;
  manifest["format_version"] = kCorpusFormatVersion;
  manifest["stage"] = preprocessed ? "preprocessed" : "raw";
  manifest["annotations"] = kAnnotationsFile;
  if (truth) manifest["ground_truth"] = kGroundTruthFile;
  json jtrials = json::array();
  std::string ann_lines;

  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    json jt;
    jt["index"] = i;
    jt["trial_id"] = t.trial_id;
    jt["participant_id"] = t.participant_id;
    jt["session_id"] = t.session_id;
    jt["stimulus_id"] = t.stimulus_id;
    jt["stimulus_span_s"] = span_json(t.stimulus_span_s);
    jt["baseline_span_s"] = t.baseline_span_s ? span_json(*t.baseline_span_s) : json(nullptr);
    json jrecs = json::array();
    for (const auto& r : t.recordings) {
      const auto name = data_file_name(i, r.modality());
      const auto bytes = encode_f32le(r.samples());
      write_bytes(dir / name, bytes);
      jrecs.push_back({{"modality", std::string(to_string(r.modality()))},
                       {"channels", r.channel_names()},
                       {"sample_rate_hz", r.sample_rate_hz()},
                       {"start_time_s", r.start_time_s()},
                       {"units", r.units()},
                       {"samples_per_channel", r.sample_count()},
                       {"dtype", "float32"},
                       {"byte_order", "little"},
                       {"layout", "channel-major"},
                       {"file", name},
                       {"crc32", crc_of(bytes)}});
    }
    jt["recordings"] = std::move(jrecs);
    jtrials.push_back(std::move(jt));
    for (const auto& a : t.annotations) ann_lines += annotation_to_json({t.trial_id, t.stimulus_id, a}).dump() + "\n";
  }
  manifest["trials"] = std::move(jtrials);
  write_text(dir / kAnnotationsFile, ann_lines);
  if (truth) write_text(dir / kGroundTruthFile, ground_truth_to_json(*truth).dump(1) + "\n");
  // Manifest last: a directory without one is never mistaken for a corpus.
  write_text(dir / kManifestFile, manifest.dump(1) + "\n");
}

namespace {

json read_manifest(const fs::path& dir) {
  const auto mpath = dir / kManifestFile;
  if (!fs::exists(mpath)) fail(Errc::MalformedManifest, "no manifest at " + mpath.string());
  json manifest;
  std::ifstream in(mpath);
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::MalformedManifest, mpath.string() + ": " + e.what());
  }
  const int version = field<int>(manifest, "format_version", "manifest");
  if (version != kCorpusFormatVersion)
    fail(Errc::UnsupportedVersion, "corpus format " + std::to_string(version) + ", reader supports " +
                                       std::to_string(kCorpusFormatVersion));
  return manifest;
}

}  // namespace

bool corpus_preprocessed(const fs::path& dir) {
  const auto m = read_manifest(dir);
  return m.contains("stage") && m["stage"] == "preprocessed";
}

std::vector<Trial> read_corpus(const fs::path& dir) {
  const json manifest = read_manifest(dir);

  std::vector<Trial> trials;
  std::map<std::string, std::size_t> by_id;
  std::map<std::pair<std::string, std::string>, std::size_t> by_stimulus;
  const auto jtrials = field<json>(manifest, "trials", "manifest");
  if (!jtrials.is_array()) fail(Errc::MalformedManifest, "manifest: 'trials' must be an array");

  for (std::size_t i = 0; i < jtrials.size(); ++i) {
    const auto& jt = jtrials[i];
    const std::string where = "trial " + std::to_string(i);
    Trial t;
    t.trial_id = field<std::string>(jt, "trial_id", where);
    t.participant_id = field<std::string>(jt, "participant_id", where);
    t.session_id = field<std::string>(jt, "session_id", where);
    t.stimulus_id = field<std::string>(jt, "stimulus_id", where);
    t.stimulus_span_s = span_field(jt, "stimulus_span_s", where);
    if (jt.contains("baseline_span_s") && !jt["baseline_span_s"].is_null())
      t.baseline_span_s = span_field(jt, "baseline_span_s", where);

    for (const auto& jr : field<json>(jt, "recordings", where)) {
      const auto file = field<std::string>(jr, "file", where);
      const auto rwhere = where + " " + file;
      const auto modality = parse_modality(field<std::string>(jr, "modality", rwhere));
      if (!modality) fail(Errc::MalformedManifest, rwhere + ": unknown modality");
      if (field<std::string>(jr, "dtype", rwhere) != "float32" || field<std::string>(jr, "byte_order", rwhere) != "little" ||
          field<std::string>(jr, "layout", rwhere) != "channel-major")
        fail(Errc::MalformedManifest, rwhere + ": unsupported sample layout");
      const auto channels = field<std::vector<std::string>>(jr, "channels", rwhere);
      const auto n = field<std::size_t>(jr, "samples_per_channel", rwhere);
      const auto path = dir / file;
      if (!fs::exists(path)) fail(Errc::MalformedManifest, "missing data file " + file);
      const auto bytes = read_bytes(path);
      const auto expected = field<std::uint32_t>(jr, "crc32", rwhere);
      const auto actual = crc_of(bytes);
      if (actual != expected) {
        std::ostringstream os;
        os << file << ": crc32 " << std::hex << actual << " != manifest " << expected;
        fail(Errc::ChecksumMismatch, os.str());
      }
      if (bytes.size() != 4 * channels.size() * n)
        fail(Errc::MalformedManifest, rwhere + ": size does not match channels x samples");
      try {
        t.recordings.emplace_back(*modality, channels, field<double>(jr, "sample_rate_hz", rwhere), decode_f32le(bytes),
                                  field<double>(jr, "start_time_s", rwhere), field<std::string>(jr, "units", rwhere));
      } catch (const Error& e) {
        fail(Errc::MalformedManifest, rwhere + ": " + e.what());
      }
    }
    if (by_id.count(t.trial_id)) fail(Errc::MalformedManifest, "duplicate trial_id " + t.trial_id);
    by_id[t.trial_id] = trials.size();
    by_stimulus[{t.participant_id, t.stimulus_id}] = trials.size();
    trials.push_back(std::move(t));
  }

  const auto apath = dir / (manifest.contains("annotations") ? field<std::string>(manifest, "annotations", "manifest")
                                                              : std::string(kAnnotationsFile));
  if (fs::exists(apath)) {
    std::ifstream in(apath);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        fail(Errc::MalformedManifest, std::string(kAnnotationsFile) + ":" + std::to_string(lineno) + ": invalid JSON");
      }
      AnnotationRecord r;
      try {
        r = annotation_from_json(j);
      } catch (const Error& e) {
        fail(Errc::MalformedManifest, std::string(kAnnotationsFile) + ":" + std::to_string(lineno) + ": " + e.what());
      }
      std::size_t idx = 0;
      if (!r.trial_id.empty()) {
        auto it = by_id.find(r.trial_id);
        if (it == by_id.end()) fail(Errc::MalformedManifest, "annotation for unknown trial " + r.trial_id);
        idx = it->second;
      } else {
        auto it = by_stimulus.find({r.annotation.participant_id, r.stimulus_id});
        if (it == by_stimulus.end())
          fail(Errc::MalformedManifest,
               "annotation for unknown trial " + r.annotation.participant_id + "/" + r.stimulus_id);
        idx = it->second;
      }
      trials[idx].annotations.push_back(r.annotation);
    }
  }
  for (const auto& t : trials) {
    try {
      t.validate();
    } catch (const Error& e) {
      fail(Errc::MalformedManifest, "trial " + t.trial_id + ": " + e.what());
    }
  }
  return trials;
}

json ground_truth_to_json(const synth::GroundTruth& t) {
  json j;
  j["seed"] = t.seed;
  json ev = json::array();
  for (const auto& e : t.events)
    ev.push_back({{"trial_id", e.trial_id},
                  {"participant_id", e.participant_id},
                  {"index", e.index},
                  {"label", std::string(to_string(e.label))},
                  {"t_true_s", e.t_true_s},
                  {"t_immediate_s", e.t_immediate_s},
                  {"t_delayed_s", e.t_delayed_s},
                  {"rating_immediate", e.rating_immediate},
                  {"rating_delayed", e.rating_delayed}});
  j["events"] = std::move(ev);
  json scrs = json::array();
  for (const auto& s : t.scrs)
    scrs.push_back({{"trial_id", s.trial_id},
                    {"onset_s", s.onset_s},
                    {"amplitude_uS", s.amplitude_uS},
                    {"event_index", s.event_index ? json(*s.event_index) : json(nullptr)}});
  j["scrs"] = std::move(scrs);
  json be = json::array();
  for (const auto& b : t.band_effects)
    be.push_back({{"trial_id", b.trial_id},
                  {"event_index", b.event_index},
                  {"emotion", std::string(to_string(b.emotion))},
                  {"band", b.band},
                  {"channels", b.channels},
                  {"gain", b.gain},
                  {"span_s", span_json(b.span_s)}});
  j["band_effects"] = std::move(be);
  json rr = json::array();
  for (const auto& [id, series] : t.rr_series) rr.push_back({{"trial_id", id}, {"rr_s", series}});
  j["rr_series"] = std::move(rr);
  return j;
}

synth::GroundTruth ground_truth_from_json(const json& j) {
  const std::string where = "ground truth";
  synth::GroundTruth t;
  t.seed = field<std::uint64_t>(j, "seed", where);
  auto emotion = [&](const json& o, const char* key) {
    const auto e = parse_emotion(field<std::string>(o, key, where));
    if (!e) fail(Errc::MalformedManifest, where + ": unknown emotion");
    return *e;
  };
  for (const auto& e : field<json>(j, "events", where))
    t.events.push_back({field<std::string>(e, "trial_id", where), field<std::string>(e, "participant_id", where),
                        field<std::size_t>(e, "index", where), emotion(e, "label"), field<double>(e, "t_true_s", where),
                        field<double>(e, "t_immediate_s", where), field<double>(e, "t_delayed_s", where),
                        field<int>(e, "rating_immediate", where), field<int>(e, "rating_delayed", where)});
  for (const auto& s : field<json>(j, "scrs", where)) {
    synth::InjectedScr r{field<std::string>(s, "trial_id", where), field<double>(s, "onset_s", where),
                         field<double>(s, "amplitude_uS", where), std::nullopt};
    if (s.contains("event_index") && !s["event_index"].is_null())
      r.event_index = field<std::size_t>(s, "event_index", where);
    t.scrs.push_back(std::move(r));
  }
  for (const auto& b : field<json>(j, "band_effects", where))
    t.band_effects.push_back({field<std::string>(b, "trial_id", where), field<std::size_t>(b, "event_index", where),
                              emotion(b, "emotion"), field<std::string>(b, "band", where),
                              field<std::vector<std::string>>(b, "channels", where), field<double>(b, "gain", where),
                              span_field(b, "span_s", where)});
  for (const auto& r : field<json>(j, "rr_series", where))
    t.rr_series.emplace_back(field<std::string>(r, "trial_id", where), field<std::vector<double>>(r, "rr_s", where));
  return t;
}

std::optional<synth::GroundTruth> read_ground_truth(const fs::path& dir) {
  const auto p = dir / kGroundTruthFile;
  if (!fs::exists(p)) return std::nullopt;
  std::ifstream in(p);
  try {
    return ground_truth_from_json(json::parse(in));
  } catch (const json::exception& e) {
    fail(Errc::MalformedManifest, p.string() + ": " + e.what());
  }
}

}  // namespace emobench::io
