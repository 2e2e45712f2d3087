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

#include "emobench/emobench.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "emobench/core/error.hpp"
#include "emobench/io/config.hpp"
#include "emobench/io/corpus.hpp"
#include "emobench/pipeline/pipeline.hpp"
#include "emobench/service/service.hpp"

struct emb_config {
  emobench::io::PipelineConfig config;
};

struct emb_corpus {
  std::vector<emobench::Trial> trials;
  std::optional<emobench::synth::GroundTruth> truth;
  bool preprocessed = false;
};

struct emb_server {
  std::unique_ptr<emobench::service::SessionStore> store;
  std::unique_ptr<emobench::service::Server> server;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_code;

emb_status record(emb_status s, std::string code, std::string msg) {
  last_code = std::move(code);
  last_error = std::move(msg);
  return s;
}

template <typename F>
emb_status guard(F&& f) noexcept {
  try {
    f();
    last_error.clear();
    last_code.clear();
    return EMB_OK;
  } catch (const emobench::Error& e) {
    using emobench::ErrorCategory;
    const auto s = e.category() == ErrorCategory::Usage  ? EMB_ERR_USAGE
                   : e.category() == ErrorCategory::Data ? EMB_ERR_DATA
                                                          : EMB_ERR_ANALYSIS;
    return record(s, std::string(emobench::errc_name(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(EMB_ERR_INTERNAL, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return record(EMB_ERR_INTERNAL, "Internal", e.what());
  } catch (...) {
    return record(EMB_ERR_INTERNAL, "Internal", "unknown failure");
  }
}

emb_status null_arg(const char* what) { return record(EMB_ERR_USAGE, "InvalidArgument", std::string(what) + " is NULL"); }

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

emobench::pipeline::Path opt_path(const char* p) {
  if (!p || !*p) return std::nullopt;
  return std::filesystem::path(p);
}

}  // namespace

extern "C" {

const char* emb_version(void) { return "0.1.0"; }
const char* emb_last_error(void) { return last_error.c_str(); }
const char* emb_last_error_code(void) { return last_code.c_str(); }
void emb_string_free(char* s) { std::free(s); }

emb_status emb_config_default(emb_config** out) {
  if (!out) return null_arg("out");
  return guard([&] { *out = new emb_config{}; });
}

emb_status emb_config_load(const char* path, emb_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] { *out = new emb_config{emobench::io::load_config(path)}; });
}

emb_status emb_config_parse(const char* json, emb_config** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  return guard([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      emobench::fail(emobench::Errc::InvalidArgument, std::string("config: ") + e.what());
    }
    *out = new emb_config{emobench::io::config_from_json(j)};
  });
}

emb_status emb_config_set_seed(emb_config* config, uint64_t seed) {
  if (!config) return null_arg("config");
  return guard([&] { emobench::io::apply_seed(config->config, seed); });
}

emb_status emb_config_to_json(const emb_config* config, char** out_json) {
  if (!config) return null_arg("config");
  if (!out_json) return null_arg("out_json");
  return guard([&] { *out_json = dup_string(emobench::io::config_to_json(config->config).dump(1)); });
}

void emb_config_free(emb_config* config) { delete config; }

emb_status emb_corpus_read(const char* dir, emb_corpus** out) {
  if (!dir) return null_arg("dir");
  if (!out) return null_arg("out");
  return guard([&] {
    auto c = std::make_unique<emb_corpus>();
    c->trials = emobench::io::read_corpus(dir);
    c->truth = emobench::io::read_ground_truth(dir);
    c->preprocessed = emobench::io::corpus_preprocessed(dir);
    *out = c.release();
  });
}

emb_status emb_corpus_generate(const emb_config* config, emb_corpus** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guard([&] {
    auto g = emobench::synth::generate_corpus(config->config.synth);
    *out = new emb_corpus{std::move(g.trials), std::move(g.truth), false};
  });
}

emb_status emb_corpus_write(const emb_corpus* corpus, const char* dir) {
  if (!corpus) return null_arg("corpus");
  if (!dir) return null_arg("dir");
  return guard([&] {
    emobench::io::write_corpus(corpus->trials, dir, corpus->truth ? &*corpus->truth : nullptr, corpus->preprocessed);
  });
}

size_t emb_corpus_trial_count(const emb_corpus* corpus) { return corpus ? corpus->trials.size() : 0; }

size_t emb_corpus_annotation_count(const emb_corpus* corpus) {
  if (!corpus) return 0;
  size_t n = 0;
  for (const auto& t : corpus->trials) n += t.annotations.size();
  return n;
}

void emb_corpus_free(emb_corpus* corpus) { delete corpus; }

size_t emb_command_count(void) { return emobench::pipeline::command_names().size(); }

const char* emb_command_name(size_t i) {
  const auto& n = emobench::pipeline::command_names();
  return i < n.size() ? n[i].c_str() : nullptr;
}

emb_status emb_run_command(const char* name, const emb_config* config, const char* in_dir, const char* out_dir,
                           char** out_report) {
  if (!name) return null_arg("name");
  if (!config) return null_arg("config");
  return guard([&] {
    if (std::string(name) == "serve")
      emobench::fail(emobench::Errc::InvalidArgument, "serve is run through emb_server_create");
    const auto report = emobench::pipeline::run_command(name, config->config, opt_path(in_dir), opt_path(out_dir));
    if (out_report) *out_report = dup_string(report.dump(1));
  });
}

emb_status emb_server_create(const emb_config* config, emb_server** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guard([&] {
    namespace svc = emobench::service;
    const auto& sc = config->config.serve;
    std::vector<svc::Stimulus> catalog;
    if (!sc.catalog.empty()) {
      catalog = svc::load_catalog(sc.catalog);
    } else if (!sc.corpus_dir.empty()) {
      catalog = svc::catalog_from_trials(emobench::io::read_corpus(sc.corpus_dir));
    } else {
      emobench::fail(emobench::Errc::InvalidArgument, "serve needs serve.catalog or serve.corpus_dir");
    }
    auto s = std::make_unique<emb_server>();
    s->store = std::make_unique<svc::SessionStore>(std::move(catalog), sc.state_dir, sc.corpus_dir);
    s->server = std::make_unique<svc::Server>(*s->store, svc::ServerOptions{sc.host, sc.port, sc.media_dir});
    *out = s.release();
  });
}

emb_status emb_server_bind(emb_server* server, int* out_port) {
  if (!server) return null_arg("server");
  return guard([&] {
    const int port = server->server->bind();
    if (out_port) *out_port = port;
  });
}

emb_status emb_server_run(emb_server* server) {
  if (!server) return null_arg("server");
  return guard([&] { server->server->listen(); });
}

void emb_server_stop(emb_server* server) {
  if (server) server->server->stop();
}

void emb_server_free(emb_server* server) { delete server; }

}  // extern "C"
