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

#include "emobench/service/service.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "httplib.h"

#include "emobench/core/error.hpp"
#include "emobench/io/corpus.hpp"

namespace emobench::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kSessionLog = "sessions.jsonl";

[[noreturn]] void bad_request(const std::string& code, const std::string& msg) { throw ApiError(400, code, msg); }
[[noreturn]] void not_found(const std::string& code, const std::string& msg) { throw ApiError(404, code, msg); }
[[noreturn]] void illegal(const std::string& msg) { throw ApiError(409, "IllegalState", msg); }

std::string session_name(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sess-%06zu", n);
  return buf;
}

void settle(Session& s) {
  if (s.state != SessionState::Complete) s.state = s.marks.empty() ? SessionState::Replaying : SessionState::AwaitingLabel;
}

// Every state change goes through here, both live and during log replay.
void apply_to(Session& s, const json& r) {
  const auto op = r.at("op").get<std::string>();
  if (op == "mark") {
    const auto idx = r.at("mark_index").get<std::size_t>();
    s.marks.push_back({idx, r.at("t_event_s").get<double>()});
    s.next_mark = std::max(s.next_mark, idx + 1);
  } else if (op == "retract" || op == "annotate") {
    const auto idx = r.at("mark_index").get<std::size_t>();
    auto it = std::find_if(s.marks.begin(), s.marks.end(), [&](const Mark& m) { return m.index == idx; });
    if (it == s.marks.end()) fail(Errc::MalformedManifest, "log references unknown mark");
    if (op == "annotate") {
      CompletedAnnotation a;
      a.mark_index = idx;
      a.annotation.t_event_s = it->t_event_s;
      a.annotation.label = *parse_emotion(r.at("label").get<std::string>());
      a.annotation.intensity = *parse_intensity(r.at("intensity").get<std::string>());
      a.annotation.session_id = s.id;
      a.annotation.participant_id = s.participant_id;
      s.annotations.push_back(std::move(a));
    }
    s.marks.erase(it);
  } else if (op == "complete") {
    s.state = SessionState::Complete;
  } else {
    fail(Errc::MalformedManifest, "unknown log op " + op);
  }
  settle(s);
}

// A never-issued index is unknown (404); an issued one that is no longer
// pending, or any mark operation outside awaiting-label, is illegal (409).
void require_pending(const Session& s, std::size_t mark_index, const char* op) {
  if (mark_index >= s.next_mark) not_found("UnknownMark", "no mark " + std::to_string(mark_index));
  if (s.state != SessionState::AwaitingLabel)
    illegal(std::string(op) + " needs a pending mark; session is " + std::string(to_string(s.state)));
  if (std::none_of(s.marks.begin(), s.marks.end(), [&](const Mark& m) { return m.index == mark_index; }))
    illegal("mark " + std::to_string(mark_index) + " is no longer pending");
}

}  // namespace

std::string_view to_string(SessionState s) noexcept {
  switch (s) {
    case SessionState::Replaying: return "replaying";
    case SessionState::AwaitingLabel: return "awaiting-label";
    case SessionState::Complete: return "complete";
  }
  return "?";
}

std::vector<Stimulus> load_catalog(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(Errc::Io, "cannot read catalog " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::MalformedManifest, "catalog " + file.string() + ": " + e.what());
  }
  const json& arr = j.is_object() && j.contains("stimuli") ? j["stimuli"] : j;
  if (!arr.is_array()) fail(Errc::MalformedManifest, "catalog must list stimuli");
  std::vector<Stimulus> out;
  for (const auto& s : arr) {
    try {
      Stimulus st{s.at("id").get<std::string>(), s.at("duration_s").get<double>(), s.value("media", std::string())};
      if (!(st.duration_s > 0) || st.id.empty()) fail(Errc::MalformedManifest, "catalog entry needs id and duration");
      for (const auto& o : out)
        if (o.id == st.id) fail(Errc::MalformedManifest, "duplicate stimulus " + st.id);
      out.push_back(std::move(st));
    } catch (const json::exception& e) {
      fail(Errc::MalformedManifest, std::string("catalog entry: ") + e.what());
    }
  }
  return out;
}

std::vector<Stimulus> catalog_from_trials(std::span<const Trial> trials) {
  std::vector<Stimulus> out;
  for (const auto& t : trials) {
    if (std::any_of(out.begin(), out.end(), [&](const Stimulus& s) { return s.id == t.stimulus_id; })) continue;
    out.push_back({t.stimulus_id, t.stimulus_duration_s(), {}});
  }
  return out;
}

SessionStore::SessionStore(std::vector<Stimulus> catalog, fs::path state_dir, fs::path corpus_dir)
    : catalog_(std::move(catalog)), state_dir_(std::move(state_dir)), corpus_dir_(std::move(corpus_dir)) {
  if (catalog_.empty()) fail(Errc::InvalidArgument, "stimulus catalog is empty");
  std::error_code ec;
  fs::create_directories(state_dir_, ec);
  if (ec) fail(Errc::Io, "cannot create " + state_dir_.string() + ": " + ec.message());
  replay();
}

const Stimulus& SessionStore::stimulus(const std::string& id) const {
  for (const auto& s : catalog_)
    if (s.id == id) return s;
  not_found("UnknownStimulus", "no stimulus '" + id + "'");
}

SessionStore::Entry& SessionStore::entry(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) not_found("UnknownSession", "no session '" + id + "'");
  return *it->second;
}

void SessionStore::log(const json& record) {
  std::lock_guard lock(log_mu_);
  std::ofstream out(state_dir_ / kSessionLog, std::ios::app);
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw ApiError(500, "Io", "cannot append to session log");
}

void SessionStore::replay() {
  std::ifstream in(state_dir_ / kSessionLog);
  if (!in) return;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(line);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json r;
    try {
      r = json::parse(lines[i]);
    } catch (const json::exception&) {
      // A torn final line is the only damage an interrupted append can cause.
      if (i + 1 == lines.size()) break;
      fail(Errc::MalformedManifest, "session log line " + std::to_string(i + 1) + " is not JSON");
    }
    try {
      apply(r);
    } catch (const json::exception& e) {
      fail(Errc::MalformedManifest, "session log line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

void SessionStore::apply(const json& r) {
  if (r.at("op") == "create") {
    auto e = std::make_unique<Entry>();
    e->session.id = r.at("session_id").get<std::string>();
    e->session.participant_id = r.at("participant_id").get<std::string>();
    e->session.stimulus_id = r.at("stimulus_id").get<std::string>();
    next_session_ = std::max(next_session_, r.at("seq").get<std::size_t>() + 1);
    sessions_[e->session.id] = std::move(e);
    return;
  }
  auto it = sessions_.find(r.at("session_id").get<std::string>());
  if (it == sessions_.end()) fail(Errc::MalformedManifest, "session log references unknown session");
  apply_to(it->second->session, r);
}

Session SessionStore::create(const std::string& participant_id, const std::string& stimulus_id) {
  if (participant_id.empty()) bad_request("InvalidField", "participant_id must be a non-empty string");
  stimulus(stimulus_id);
  std::unique_lock lock(map_mu_);
  const auto seq = next_session_++;
  const json r{{"op", "create"},
               {"seq", seq},
               {"session_id", session_name(seq)},
               {"participant_id", participant_id},
               {"stimulus_id", stimulus_id}};
  log(r);
  apply(r);
  return sessions_.at(session_name(seq))->session;
}

Session SessionStore::get(const std::string& id) const {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  return e.session;
}

Mark SessionStore::mark(const std::string& id, double t_event_s) {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  auto& s = e.session;
  if (s.state == SessionState::Complete) illegal("session is complete");
  const auto& st = stimulus(s.stimulus_id);
  if (!std::isfinite(t_event_s) || t_event_s < 0.0 || t_event_s > st.duration_s)
    bad_request("OutOfBounds", "t_event_s must lie within [0, " + std::to_string(st.duration_s) + "]");
  const json r{{"op", "mark"}, {"session_id", id}, {"mark_index", s.next_mark}, {"t_event_s", t_event_s}};
  log(r);
  apply_to(s, r);
  return s.marks.back();
}

CompletedAnnotation SessionStore::annotate(const std::string& id, std::size_t mark_index, Emotion label,
                                           Intensity intensity) {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  auto& s = e.session;
  require_pending(s, mark_index, "annotate");
  const json r{{"op", "annotate"},
               {"session_id", id},
               {"mark_index", mark_index},
               {"label", std::string(emobench::to_string(label))},
               {"intensity", std::string(emobench::to_string(intensity))}};
  log(r);
  apply_to(s, r);
  persist_annotation(s, s.annotations.back());
  return s.annotations.back();
}

void SessionStore::retract(const std::string& id, std::size_t mark_index) {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  auto& s = e.session;
  require_pending(s, mark_index, "retract");
  const json r{{"op", "retract"}, {"session_id", id}, {"mark_index", mark_index}};
  log(r);
  apply_to(s, r);
}

Session SessionStore::complete(const std::string& id) {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  auto& s = e.session;
  if (s.state != SessionState::Replaying)
    illegal(std::string("complete needs a replaying session with no pending marks; session is ") +
            std::string(to_string(s.state)));
  const json r{{"op", "complete"}, {"session_id", id}};
  log(r);
  apply_to(s, r);
  return s;
}

std::vector<CompletedAnnotation> SessionStore::annotations(const std::string& id) const {
  auto& e = entry(id);
  std::lock_guard lock(e.mu);
  return e.session.annotations;
}

void SessionStore::persist_annotation(const Session& s, const CompletedAnnotation& a) {
  const io::AnnotationRecord rec{{}, s.stimulus_id, a.annotation};
  std::lock_guard lock(log_mu_);
  io::append_annotation(state_dir_ / io::kAnnotationsFile, rec);
  if (!corpus_dir_.empty()) io::append_annotation(corpus_dir_ / io::kAnnotationsFile, rec);
}

json annotation_to_json(const Session& s, const CompletedAnnotation& a) {
  return {{"mark_index", a.mark_index},
          {"t_event_s", a.annotation.t_event_s},
          {"label", std::string(to_string(a.annotation.label))},
          {"intensity", std::string(to_string(a.annotation.intensity))},
          {"session_id", s.id},
          {"participant_id", s.participant_id},
          {"stimulus_id", s.stimulus_id}};
}

namespace {

json stimulus_json(const Stimulus& s) {
  return {{"id", s.id}, {"duration_s", s.duration_s}, {"media_url", s.media.empty() ? json(nullptr) : json("/media/" + s.media)}};
}

}  // namespace

json session_to_json(const Session& s, const Stimulus& stimulus) {
  json marks = json::array();
  for (const auto& m : s.marks) marks.push_back({{"mark_index", m.index}, {"t_event_s", m.t_event_s}});
  json anns = json::array();
  for (const auto& a : s.annotations) anns.push_back(annotation_to_json(s, a));
  return {{"session_id", s.id},
          {"participant_id", s.participant_id},
          {"stimulus_id", s.stimulus_id},
          {"stimulus", stimulus_json(stimulus)},
          {"state", std::string(to_string(s.state))},
          {"marks", marks},
          {"annotations", anns}};
}

// ---------------------------------------------------------------------------
// HTTP binding

struct Server::Impl {
  SessionStore& store;
  ServerOptions options;
  httplib::Server http;
  int port = -1;

  Impl(SessionStore& s, ServerOptions o) : store(s), options(std::move(o)) {}
};

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send(res, status, {{"code", code}, {"message", message}});
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ApiError& e) {
      send_error(res, e.status(), e.code(), e.what());
    } catch (const Error& e) {
      send_error(res, 500, std::string(errc_name(e.code())), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

json body_object(const httplib::Request& req) {
  json j;
  try {
    j = json::parse(req.body);
  } catch (const json::exception&) {
    bad_request("InvalidJson", "request body is not valid JSON");
  }
  if (!j.is_object()) bad_request("InvalidJson", "request body must be a JSON object");
  return j;
}

std::string string_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) bad_request("InvalidField", std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) bad_request("InvalidField", std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

std::size_t index_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
    bad_request("InvalidField", std::string("'") + key + "' must be a non-negative integer");
  return j[key].get<std::size_t>();
}

}  // namespace

Server::Server(SessionStore& store, ServerOptions options) : impl_(std::make_unique<Impl>(store, std::move(options))) {
  auto& http = impl_->http;
  auto& st = impl_->store;

  http.Get("/api/stimuli", guarded([&st](const httplib::Request&, httplib::Response& res) {
             json arr = json::array();
             for (const auto& s : st.catalog()) arr.push_back(stimulus_json(s));
             send(res, 200, arr);
           }));
  http.Get("/api/labels", guarded([](const httplib::Request&, httplib::Response& res) {
             std::vector<std::string> emotions, intensities;
             for (auto e : kAllEmotions) emotions.emplace_back(to_string(e));
             for (auto i : kAllIntensities) intensities.emplace_back(to_string(i));
             send(res, 200, {{"emotions", emotions}, {"intensities", intensities}});
           }));
  http.Post("/api/sessions", guarded([&st](const httplib::Request& req, httplib::Response& res) {
              const auto b = body_object(req);
              const auto s = st.create(string_field(b, "participant_id"), string_field(b, "stimulus_id"));
              auto j = session_to_json(s, st.stimulus(s.stimulus_id));
              send(res, 201, j);
            }));
  http.Get(R"(/api/sessions/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
             const auto s = st.get(req.matches[1]);
             send(res, 200, session_to_json(s, st.stimulus(s.stimulus_id)));
           }));
  http.Post(R"(/api/sessions/([^/]+)/mark)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
              const std::string id = req.matches[1];
              st.get(id);  // unknown session wins over a bad body
              const auto b = body_object(req);
              const auto m = st.mark(id, number_field(b, "t_event_s"));
              send(res, 201, {{"mark_index", m.index}, {"t_event_s", m.t_event_s},
                              {"state", std::string(to_string(st.get(id).state))}});
            }));
  http.Post(R"(/api/sessions/([^/]+)/annotate)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
              const std::string id = req.matches[1];
              st.get(id);
              const auto b = body_object(req);
              const auto idx = index_field(b, "mark_index");
              const auto label = parse_emotion(string_field(b, "label"));
              if (!label) bad_request("InvalidField", "'label' must be one of the six emotions");
              const auto intensity = parse_intensity(string_field(b, "intensity"));
              if (!intensity) bad_request("InvalidField", "'intensity' must be Low, Medium or High");
              const auto a = st.annotate(id, idx, *label, *intensity);
              send(res, 201, annotation_to_json(st.get(id), a));
            }));
  http.Delete(R"(/api/sessions/([^/]+)/mark/(\d+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                st.get(id);
                std::size_t idx = 0;
                try {
                  idx = std::stoull(req.matches[2]);
                } catch (const std::exception&) {
                  not_found("UnknownMark", "mark index out of range");
                }
                st.retract(id, idx);
                const auto s = st.get(id);
                send(res, 200, session_to_json(s, st.stimulus(s.stimulus_id)));
              }));
  http.Get(R"(/api/sessions/([^/]+)/annotations)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
             const auto s = st.get(req.matches[1]);
             json arr = json::array();
             for (const auto& a : s.annotations) arr.push_back(annotation_to_json(s, a));
             send(res, 200, arr);
           }));
  http.Post(R"(/api/sessions/([^/]+)/complete)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
              const auto s = st.complete(req.matches[1]);
              send(res, 200, session_to_json(s, st.stimulus(s.stimulus_id)));
            }));

  if (!impl_->options.media_dir.empty() && !http.set_mount_point("/media", impl_->options.media_dir.string()))
    fail(Errc::Io, "media directory " + impl_->options.media_dir.string() + " does not exist");

  http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) send_error(res, 404, "NotFound", "no route for " + req.method + " " + req.path);
    else send_error(res, res.status, "HttpError", "request failed");
  });
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& i = *impl_;
  if (i.options.port == 0) {
    i.port = i.http.bind_to_any_port(i.options.host);
  } else {
    i.port = i.http.bind_to_port(i.options.host, i.options.port) ? i.options.port : -1;
  }
  if (i.port < 0) fail(Errc::Io, "cannot bind " + i.options.host + ":" + std::to_string(i.options.port));
  return i.port;
}

void Server::listen() {
  if (impl_->port < 0) fail(Errc::InvalidArgument, "bind() before listen()");
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

}  // namespace emobench::service
