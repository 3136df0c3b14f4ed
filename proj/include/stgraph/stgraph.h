/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The stgraph Authors */

#ifndef STGRAPH_STGRAPH_H
#define STGRAPH_STGRAPH_H

/*
 * C interface to the stgraph library.
 *
 * Every function returns an stg_status. On failure a description is available
 * from stg_last_error() on the calling thread until the next call. Structured
 * results are returned as NUL-terminated JSON strings allocated by the
 * library; release them with stg_string_free().
 *
 * Node references are written "Kind:local_id" (User, PullRequest, WorkItem,
 * File, Repository). A bare id names a User. Timestamps are
 * "YYYY-MM-DDTHH:MM:SSZ".
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STGRAPH_BUILDING)
#    define STG_API __declspec(dllexport)
#  else
#    define STG_API __declspec(dllimport)
#  endif
#else
#  define STG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stg_status {
    STG_OK = 0,
    STG_E_INVALID_ARGUMENT = 1,
    STG_E_NOT_FOUND = 2,
    STG_E_SCHEMA = 3,
    STG_E_IO = 4,
    STG_E_PARSE = 5,
    STG_E_STATE = 6,
    STG_E_INTERNAL = 99
} stg_status;

typedef struct stg_workspace stg_workspace;
typedef struct stg_service stg_service;

STG_API const char* stg_version(void);
STG_API const char* stg_status_name(stg_status status);
STG_API const char* stg_last_error(void);
STG_API void stg_string_free(char* s);

/* Config file (key = value) as JSON; defaults for keys not present. */
STG_API stg_status stg_config_load(const char* path, char** out_json);

/* ---- workspace ---------------------------------------------------------- */

STG_API stg_status stg_workspace_open(const char* data_dir, int retention_days,
                                      stg_workspace** out);
STG_API void stg_workspace_close(stg_workspace* ws);
/* Persists graph, ingestion state and follows. */
STG_API stg_status stg_workspace_save(stg_workspace* ws);

/* repos_csv may be NULL or "" for every repository with a bootstrap file. */
STG_API stg_status stg_ingest_bootstrap(stg_workspace* ws, const char* repos_csv,
                                        const char* now, char** out_report_json);
STG_API stg_status stg_ingest_incremental(stg_workspace* ws, const char* now, int auto_heal,
                                          char** out_report_json);
/* Dry run: gap report for pending incremental files. */
STG_API stg_status stg_heal_check(stg_workspace* ws, char** out_gaps_json);
/* repos_csv NULL or "" heals every quarantined repository. */
STG_API stg_status stg_heal(stg_workspace* ws, const char* repos_csv, const char* now,
                            char** out_report_json);

/* Builds and persists both BM25 indices from the current graph. */
STG_API stg_status stg_index_build(stg_workspace* ws, int use_metadata, int use_title,
                                   int use_description);

STG_API stg_status stg_recommend(stg_workspace* ws, const char* title, const char* description,
                                 const char* requester, size_t k, int include_timings,
                                 char** out_json);
/* view: "most_recent", "relevance" or "team_only". */
STG_API stg_status stg_feed(stg_workspace* ws, const char* user, const char* view, size_t limit,
                            char** out_json);
STG_API stg_status stg_follow(stg_workspace* ws, const char* user, const char* item, int followed,
                              char** out_json);
STG_API stg_status stg_homepage(stg_workspace* ws, const char* user, const char* view,
                                size_t feed_limit, char** out_json);
STG_API stg_status stg_graph_stats(stg_workspace* ws, char** out_json);
/* *out_distance = -1 when unreachable within max_depth. */
STG_API stg_status stg_proximity(stg_workspace* ws, const char* a, const char* b, int max_depth,
                                 int* out_distance);

/* ---- synthetic corpus and evaluation ----------------------------------- */

/* spec_json may be NULL for defaults; keys: seed, n_repos, n_devs, n_topics,
 * prs_per_dev, link_rate, vocab_per_topic, noise_rate, team_size. */
STG_API stg_status stg_synth(const char* out_dir, const char* spec_json, char** out_manifest_json);

typedef enum stg_eval_format {
    STG_EVAL_JSON = 0,
    STG_EVAL_TSV = 1,
    STG_EVAL_TEXT = 2
} stg_eval_format;

/* Reads ground truth from the workspace directory. configs_csv / ks_csv may
 * be NULL for all configs and K = 3,5,10. */
STG_API stg_status stg_evaluate(stg_workspace* ws, const char* configs_csv, const char* ks_csv,
                                size_t max_queries, stg_eval_format format, char** out);

/* ---- HTTP service ------------------------------------------------------- */

typedef struct stg_service_options {
    const char* host;           /* NULL: 127.0.0.1 */
    uint16_t port;              /* 0: any free port */
    size_t default_k;           /* 0: 10 */
    size_t feed_limit;          /* 0: 50 */
    size_t telemetry_queue;     /* 0: 4096 */
    const char* telemetry_path; /* NULL: <data_dir>/telemetry.ndjson */
} stg_service_options;

STG_API stg_status stg_service_start(stg_workspace* ws, const stg_service_options* options,
                                     stg_service** out);
STG_API uint16_t stg_service_port(const stg_service* service);
/* Stops serving, drains telemetry and frees the handle. */
STG_API void stg_service_stop(stg_service* service);

#ifdef __cplusplus
}
#endif

#endif /* STGRAPH_STGRAPH_H */
