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

#ifndef EMOBENCH_SERVICE_SERVICE_HPP
#define EMOBENCH_SERVICE_SERVICE_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "emobench/core/model.hpp"

namespace emobench::service {

struct Stimulus {
  std::string id;
  double duration_s = 0.0;
  std::string media;  // path relative to the media directory; may be empty
};

/// {"stimuli": [{"id", "duration_s", "media"}]} or a bare array of the same.
std::vector<Stimulus> load_catalog(const std::filesystem::path& file);
/// Distinct stimuli of a corpus, in first-seen order, without media.
std::vector<Stimulus> catalog_from_trials(std::span<const Trial> trials);

enum class SessionState { Replaying, AwaitingLabel, Complete };
std::string_view to_string(SessionState s) noexcept;

struct Mark {
  std::size_t index = 0;  // stable for the life of the session
  double t_event_s = 0.0;
};

struct CompletedAnnotation {
  std::size_t mark_index = 0;
  EmotionAnnotation annotation;
};

struct Session {
  std::string id;
  std::string participant_id;
  std::string stimulus_id;
  SessionState state = SessionState::Replaying;
  std::vector<Mark> marks;  // pending, in creation order
  std::vector<CompletedAnnotation> annotations;
  std::size_t next_mark = 0;
};

/// Carries the HTTP status the error maps to: 400 validation, 404 unknown
/// id, 409 illegal state transition.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

// Sessions live in memory and in an append-only log (state_dir/sessions.jsonl)
// that is replayed on construction. Confirmed annotations are also appended in
// corpus annotation-line format to state_dir/annotations.jsonl and, when a
// corpus directory is configured, to that corpus's annotations file.
class SessionStore {
 public:
  SessionStore(std::vector<Stimulus> catalog, std::filesystem::path state_dir, std::filesystem::path corpus_dir = {});

  const std::vector<Stimulus>& catalog() const noexcept { return catalog_; }
  const Stimulus& stimulus(const std::string& id) const;

  Session create(const std::string& participant_id, const std::string& stimulus_id);
  Session get(const std::string& id) const;
  Mark mark(const std::string& id, double t_event_s);
  CompletedAnnotation annotate(const std::string& id, std::size_t mark_index, Emotion label, Intensity intensity);
  void retract(const std::string& id, std::size_t mark_index);
  Session complete(const std::string& id);
  std::vector<CompletedAnnotation> annotations(const std::string& id) const;

 private:
  struct Entry {
    mutable std::mutex mu;
    Session session;
  };

  Entry& entry(const std::string& id) const;
  void log(const nlohmann::json& record);
  void replay();
  void apply(const nlohmann::json& record);
  void persist_annotation(const Session& s, const CompletedAnnotation& a);

  std::vector<Stimulus> catalog_;
  std::filesystem::path state_dir_;
  std::filesystem::path corpus_dir_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::unique_ptr<Entry>> sessions_;
  std::size_t next_session_ = 1;
  std::mutex log_mu_;
};

nlohmann::json session_to_json(const Session& s, const Stimulus& stimulus);
nlohmann::json annotation_to_json(const Session& s, const CompletedAnnotation& a);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path media_dir;
};

class Server {
 public:
  Server(SessionStore& store, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket; returns the bound port. Io on failure.
  int bind();
  /// Serves until stop(); bind() must have succeeded.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emobench::service

#endif
