/* Copyright 2026 The softspace Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to the softspace library.
 *
 * Objects are opaque handles created by *_create / *_load / softspace_analyze
 * and released with the matching *_destroy. Every fallible call returns a
 * softspace_status; on failure softspace_last_error() describes the problem
 * for the calling thread. Strings handed out through char** parameters are
 * owned by the caller and must be released with softspace_string_free().
 */

#ifndef SOFTSPACE_H
#define SOFTSPACE_H

#include <stddef.h>
#include <stdint.h>

#if defined(SOFTSPACE_BUILDING_LIBRARY)
#define SOFTSPACE_API __attribute__((visibility("default")))
#else
#define SOFTSPACE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum softspace_status {
  SOFTSPACE_OK = 0,
  SOFTSPACE_ERR_INVALID_ARGUMENT = 1,
  SOFTSPACE_ERR_IO = 2,
  SOFTSPACE_ERR_PARSE = 3,
  SOFTSPACE_ERR_INVALID_MATRIX = 4,
  SOFTSPACE_ERR_UNKNOWN_MODULE = 5,
  SOFTSPACE_ERR_EMPTY_SPACE = 6,
  SOFTSPACE_ERR_DEGENERATE_VARIANCE = 7,
  SOFTSPACE_ERR_EMPTY_WEIGHTS = 8,
  SOFTSPACE_ERR_NONPOSITIVE_M = 9,
  SOFTSPACE_ERR_TOO_FEW_ZONES = 10,
  SOFTSPACE_ERR_ZERO_VARIANCE = 11,
  SOFTSPACE_ERR_INTERNAL = 99
} softspace_status;

typedef enum softspace_weights { SOFTSPACE_WEIGHTS_BINARY = 0, SOFTSPACE_WEIGHTS_ROW = 1 } softspace_weights;
typedef enum softspace_m_mode { SOFTSPACE_M_STANDARD = 0, SOFTSPACE_M_LITERAL = 1 } softspace_m_mode;
typedef enum softspace_inference { SOFTSPACE_INFERENCE_PERMUTATION = 0, SOFTSPACE_INFERENCE_ANALYTIC = 1 } softspace_inference;
typedef enum softspace_moments { SOFTSPACE_MOMENTS_CONDITIONAL = 0, SOFTSPACE_MOMENTS_TOTAL = 1 } softspace_moments;

typedef enum softspace_cluster {
  SOFTSPACE_CLUSTER_HOT_SPOT = 0,
  SOFTSPACE_CLUSTER_COOL_SPOT = 1,
  SOFTSPACE_CLUSTER_HIGH_VALUE_OUTLIER = 2,
  SOFTSPACE_CLUSTER_LOW_VALUE_OUTLIER = 3,
  SOFTSPACE_CLUSTER_NEUTRAL = 4,
  SOFTSPACE_CLUSTER_ISOLATED = 5
} softspace_cluster;

typedef enum softspace_report_format {
  SOFTSPACE_REPORT_JSON = 0,
  SOFTSPACE_REPORT_CSV = 1,
  SOFTSPACE_REPORT_MARKDOWN = 2
} softspace_report_format;

typedef enum softspace_graph_format { SOFTSPACE_GRAPH_DOT = 0, SOFTSPACE_GRAPH_GRAPHML = 1 } softspace_graph_format;

typedef struct softspace_ingest softspace_ingest;
typedef struct softspace_dataset softspace_dataset;
typedef struct softspace_report softspace_report;

/* ---- errors and memory ------------------------------------------------- */

SOFTSPACE_API const char* softspace_last_error(void);
SOFTSPACE_API const char* softspace_status_name(softspace_status status);
SOFTSPACE_API void softspace_string_free(char* s);
SOFTSPACE_API const char* softspace_version(void);

/* ---- log ingestion ------------------------------------------------------ */

typedef struct softspace_ingest_config {
  const char* field_map;       /* "time=ts,thread=tid,..." or NULL for defaults */
  int strict;                  /* nonzero: fail on the first malformed record */
  int32_t day_offset_minutes;  /* shift from UTC for daily buckets */
} softspace_ingest_config;

typedef struct softspace_ingest_summary {
  uint64_t events_parsed;
  uint64_t events_rejected;
  uint64_t unmatched_exits;
  uint64_t unclosed_entries;
  uint64_t threads_seen;
} softspace_ingest_summary;

/* config may be NULL for defaults. */
SOFTSPACE_API softspace_status softspace_ingest_create(const softspace_ingest_config* config,
                                                       softspace_ingest** out);
SOFTSPACE_API void softspace_ingest_destroy(softspace_ingest* ingest);
/* Successive calls behave as if the inputs were concatenated. */
SOFTSPACE_API softspace_status softspace_ingest_file(softspace_ingest* ingest, const char* path);
SOFTSPACE_API softspace_status softspace_ingest_buffer(softspace_ingest* ingest, const char* data,
                                                       size_t length);
SOFTSPACE_API softspace_status softspace_ingest_get_summary(const softspace_ingest* ingest,
                                                            softspace_ingest_summary* out);
/* caller,callee,count */
SOFTSPACE_API softspace_status softspace_ingest_edges_csv(const softspace_ingest* ingest, char** out);
/* day,total_count */
SOFTSPACE_API softspace_status softspace_ingest_daily_csv(const softspace_ingest* ingest, char** out);
SOFTSPACE_API softspace_status softspace_ingest_build_dataset(const softspace_ingest* ingest,
                                                              softspace_dataset** out);

/* ---- datasets ----------------------------------------------------------- */

SOFTSPACE_API softspace_status softspace_dataset_from_csv(const char* matrix_csv, const char* counts_csv,
                                                          softspace_dataset** out);
SOFTSPACE_API softspace_status softspace_dataset_load(const char* matrix_path, const char* counts_path,
                                                      softspace_dataset** out);
SOFTSPACE_API void softspace_dataset_destroy(softspace_dataset* ds);
SOFTSPACE_API size_t softspace_dataset_size(const softspace_dataset* ds);
/* The returned label stays valid while the dataset lives. */
SOFTSPACE_API softspace_status softspace_dataset_label(const softspace_dataset* ds, size_t zone,
                                                       const char** out);
SOFTSPACE_API softspace_status softspace_dataset_count(const softspace_dataset* ds, size_t zone,
                                                       uint64_t* out);
/* Binary proximity w_ij (0 or 1). */
SOFTSPACE_API softspace_status softspace_dataset_weight(const softspace_dataset* ds, size_t i, size_t j,
                                                        double* out);
SOFTSPACE_API softspace_status softspace_dataset_matrix_csv(const softspace_dataset* ds, char** out);
SOFTSPACE_API softspace_status softspace_dataset_counts_csv(const softspace_dataset* ds, char** out);

/* ---- analysis ----------------------------------------------------------- */

typedef struct softspace_options {
  softspace_weights weights;
  softspace_m_mode m_mode;
  softspace_inference inference;
  softspace_moments moments;
  double alpha;
  uint64_t permutations;
  uint64_t seed;
  int fdr;
  unsigned threads; /* 0 = hardware concurrency; never changes results */
} softspace_options;

typedef struct softspace_zone_view {
  const char* zone;
  double i_local;
  double deviation;
  double lag;
  double m_constant;
  double e_null;
  double var_null;
  double z; /* NaN when undefined */
  int has_z;
  double p_value;
  softspace_cluster cluster;
  int significant;
} softspace_zone_view;

typedef struct softspace_global_view {
  double i_value;
  size_t n;
  double s0;
  double mean_y;
} softspace_global_view;

/* Defaults: row weights, standard m, permutation inference with conditional
 * moments, alpha 0.05, 999 permutations, seed 0, no FDR, 1 thread. */
SOFTSPACE_API void softspace_options_default(softspace_options* options);
SOFTSPACE_API softspace_status softspace_analyze(const softspace_dataset* ds, const softspace_options* options,
                                                 softspace_report** out);
SOFTSPACE_API softspace_status softspace_report_from_json(const char* json, softspace_report** out);
SOFTSPACE_API void softspace_report_destroy(softspace_report* report);
SOFTSPACE_API softspace_status softspace_report_render(const softspace_report* report,
                                                       softspace_report_format format, char** out);
SOFTSPACE_API softspace_status softspace_report_global(const softspace_report* report,
                                                       softspace_global_view* out);
SOFTSPACE_API size_t softspace_report_zone_count(const softspace_report* report);
/* Pointers inside the view stay valid while the report lives. */
SOFTSPACE_API softspace_status softspace_report_zone(const softspace_report* report, size_t index,
                                                     softspace_zone_view* out);

/* ---- exports ------------------------------------------------------------ */

typedef struct softspace_graph_options {
  int only_significant;
  int scale_by_count;
  const char* colors; /* "hot=red,cool=blue,..." or NULL */
} softspace_graph_options;

/* The report's zones must match the dataset's zones. options may be NULL. */
SOFTSPACE_API softspace_status softspace_export_graph(const softspace_dataset* ds, const softspace_report* report,
                                                      softspace_graph_format format,
                                                      const softspace_graph_options* options, char** out);
SOFTSPACE_API softspace_status softspace_export_scatter_csv(const softspace_dataset* ds,
                                                            const softspace_report* report, char** out);
SOFTSPACE_API softspace_status softspace_export_scatter_svg(const softspace_dataset* ds,
                                                            const softspace_report* report, const char* colors,
                                                            char** out);

/* ---- synthetic logs ----------------------------------------------------- */

typedef enum softspace_topology {
  SOFTSPACE_TOPOLOGY_GRID = 0,
  SOFTSPACE_TOPOLOGY_TREE = 1,
  SOFTSPACE_TOPOLOGY_GOD_OBJECT = 2,
  SOFTSPACE_TOPOLOGY_RANDOM = 3
} softspace_topology;

typedef enum softspace_pattern {
  SOFTSPACE_PATTERN_BLOCK = 0,
  SOFTSPACE_PATTERN_CHECKERBOARD = 1,
  SOFTSPACE_PATTERN_UNIFORM = 2,
  SOFTSPACE_PATTERN_PLANTED_HOT_SPOT = 3,
  SOFTSPACE_PATTERN_PLANTED_LOW_OUTLIER = 4
} softspace_pattern;

typedef struct softspace_synth_options {
  softspace_topology topology;
  uint64_t n;
  softspace_pattern pattern;
  uint64_t threads;
  uint64_t seed;
} softspace_synth_options;

/* manifest may be NULL; otherwise receives the JSON plan (labels, counts,
 * edges, planted zone). */
SOFTSPACE_API softspace_status softspace_synth(const softspace_synth_options* options, char** log_jsonl,
                                               char** manifest);

#ifdef __cplusplus
}
#endif

#endif /* SOFTSPACE_H */
