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

// Command-line driver. Talks to the library through the C API only.

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "emobench/emobench.h"

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string in;
  std::optional<int> port;
  bool quiet = false;
};

int exit_code(emb_status s) { return s == EMB_ERR_INTERNAL ? 3 : static_cast<int>(s); }

int report_failure(emb_status s) {
  std::cerr << "emobench: " << emb_last_error() << '\n';
  return exit_code(s);
}

// Handle that frees itself.
struct Config {
  emb_config* p = nullptr;
  ~Config() { emb_config_free(p); }
};

emb_status load(const Options& o, Config& c) {
  const auto s = o.config.empty() ? emb_config_default(&c.p) : emb_config_load(o.config.c_str(), &c.p);
  if (s != EMB_OK) return s;
  if (o.seed) return emb_config_set_seed(c.p, *o.seed);
  return EMB_OK;
}

int run_pipeline(const std::string& name, const Options& o) {
  Config c;
  if (auto s = load(o, c); s != EMB_OK) return report_failure(s);
  char* report = nullptr;
  const auto s = emb_run_command(name.c_str(), c.p, o.in.empty() ? nullptr : o.in.c_str(),
                                 o.out.empty() ? nullptr : o.out.c_str(), &report);
  if (s != EMB_OK) return report_failure(s);
  if (o.out.empty()) {
    std::fwrite(report, 1, std::strlen(report), stdout);
    std::fputc('\n', stdout);
  } else if (!o.quiet) {
    std::cerr << "emobench: wrote " << o.out << '/' << name << ".json\n";
  }
  emb_string_free(report);
  return 0;
}

int run_serve(const Options& o) {
  Config c;
  if (auto s = load(o, c); s != EMB_OK) return report_failure(s);
  if (o.port || !o.in.empty() || !o.out.empty()) {
    // Command-line overrides go through a JSON round-trip of the config.
    char* js = nullptr;
    if (auto s = emb_config_to_json(c.p, &js); s != EMB_OK) return report_failure(s);
    auto j = nlohmann::json::parse(js);
    emb_string_free(js);
    if (o.port) j["serve"]["port"] = *o.port;
    if (!o.in.empty()) j["serve"]["corpus_dir"] = o.in;
    if (!o.out.empty()) j["serve"]["state_dir"] = o.out;
    Config next;
    if (auto s = emb_config_parse(j.dump().c_str(), &next.p); s != EMB_OK) return report_failure(s);
    std::swap(c.p, next.p);
  }

  // Signals are taken by a waiting thread, never by the serving threads.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  emb_server* server = nullptr;
  if (auto s = emb_server_create(c.p, &server); s != EMB_OK) return report_failure(s);
  int port = 0;
  if (auto s = emb_server_bind(server, &port); s != EMB_OK) {
    emb_server_free(server);
    return report_failure(s);
  }
  std::cerr << "emobench: serving on port " << port << '\n';
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    emb_server_stop(server);
  });
  const auto s = emb_server_run(server);
  // Wake the waiter if the server ended for a reason other than a signal.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  emb_server_free(server);
  return s == EMB_OK ? 0 : report_failure(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emobench: fine-grained emotion annotation pipeline for physiological signals"};
  app.require_subcommand(1);
  Options o;

  const char* help[] = {
      "synth",             "generate a synthetic corpus into --out",
      "preprocess",        "filter, resample and repair a corpus into --out",
      "epoch",             "list labeled windows for the configured strategy",
      "features",          "extract feature vectors (features.csv under --out)",
      "validate-psd",      "event-minus-baseline band power with cluster permutation tests",
      "validate-scr",      "GSR increase percentages, arousal contrast, SCR detection quality",
      "compare-paradigms", "immediate versus delayed annotation paradigms",
      "bench",             "LOSO classification benchmark (report JSON and table CSV)",
      "serve",             "HTTP annotation service",
  };
  for (std::size_t i = 0; i < std::size(help); i += 2) {
    auto* sub = app.add_subcommand(help[i], help[i + 1]);
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "seed for every stochastic stage");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--in", o.in, "input corpus directory (default: synthesize from the config)");
    sub->add_flag("--quiet", o.quiet, "no progress messages");
    if (std::string(help[i]) == "serve") sub->add_option("--port", o.port, "listen port (0 picks a free one)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "emobench: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  const auto name = app.get_subcommands().front()->get_name();
  if (name == "serve") return run_serve(o);
  return run_pipeline(name, o);
}
