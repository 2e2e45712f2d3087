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

#ifndef EMOBENCH_EMOBENCH_H
#define EMOBENCH_EMOBENCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define EMB_API __attribute__((visibility("default")))
#else
#define EMB_API
#endif

/* Status codes double as CLI exit codes (internal maps to 3 there). */
typedef enum {
  EMB_OK = 0,
  EMB_ERR_USAGE = 1,
  EMB_ERR_DATA = 2,
  EMB_ERR_ANALYSIS = 3,
  EMB_ERR_INTERNAL = 4
} emb_status;

typedef struct emb_config emb_config;
typedef struct emb_corpus emb_corpus;
typedef struct emb_server emb_server;

EMB_API const char* emb_version(void);

/* Message and error-code name of the last failure on the calling thread. */
EMB_API const char* emb_last_error(void);
EMB_API const char* emb_last_error_code(void);

/* Strings returned through char** out-parameters are released with this. */
EMB_API void emb_string_free(char* s);

EMB_API emb_status emb_config_default(emb_config** out);
EMB_API emb_status emb_config_load(const char* path, emb_config** out);
EMB_API emb_status emb_config_parse(const char* json, emb_config** out);
/* Applies one seed to synthesis, classifier training and permutation tests. */
EMB_API emb_status emb_config_set_seed(emb_config* config, uint64_t seed);
EMB_API emb_status emb_config_to_json(const emb_config* config, char** out_json);
EMB_API void emb_config_free(emb_config* config);

EMB_API emb_status emb_corpus_read(const char* dir, emb_corpus** out);
EMB_API emb_status emb_corpus_generate(const emb_config* config, emb_corpus** out);
EMB_API emb_status emb_corpus_write(const emb_corpus* corpus, const char* dir);
EMB_API size_t emb_corpus_trial_count(const emb_corpus* corpus);
EMB_API size_t emb_corpus_annotation_count(const emb_corpus* corpus);
EMB_API void emb_corpus_free(emb_corpus* corpus);

/* Pipeline commands: synth, preprocess, epoch, features, validate-psd,
   validate-scr, compare-paradigms, bench. in_dir and out_dir may be NULL.
   out_report receives the JSON report and may be NULL. */
EMB_API size_t emb_command_count(void);
EMB_API const char* emb_command_name(size_t i);
EMB_API emb_status emb_run_command(const char* name, const emb_config* config, const char* in_dir,
                                   const char* out_dir, char** out_report);

/* Annotation service configured from the config's "serve" section. */
EMB_API emb_status emb_server_create(const emb_config* config, emb_server** out);
EMB_API emb_status emb_server_bind(emb_server* server, int* out_port);
/* Blocks until emb_server_stop is called from another thread or a signal handler. */
EMB_API emb_status emb_server_run(emb_server* server);
EMB_API void emb_server_stop(emb_server* server);
EMB_API void emb_server_free(emb_server* server);

#ifdef __cplusplus
}
#endif

#endif
