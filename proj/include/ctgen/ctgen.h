/* C interface to the contingency-table and multigraph samplers. */
#ifndef CTGEN_CTGEN_H
#define CTGEN_CTGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define CTGEN_API __attribute__((visibility("default")))
#else
#define CTGEN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ctg_status {
  CTG_OK = 0,
  CTG_INVALID_ARGUMENT,
  CTG_UNEQUAL_SUMS,
  CTG_EMPTY,
  CTG_NOT_BIGRAPHICAL,
  CTG_NOT_GRAPHICAL,
  CTG_ODD_SUM,
  CTG_PROBABILITY_OUT_OF_RANGE,
  CTG_INVALID_DISTRIBUTION,
  CTG_INVARIANT_VIOLATION,
  CTG_INFEASIBLE,
  CTG_APPROXIMATE_CUTOFF,
  CTG_FIXTURE_INVALID,
  CTG_TOO_LARGE,
  CTG_INSUFFICIENT_SAMPLES,
  CTG_INTERNAL
} ctg_status;

/* Sampler options. Initialise with ctg_config_init. */
typedef struct ctg_config {
  /* Nonzero: skip the Brute branch whenever Gen is available. */
  int approximate;
  /* Restarts allowed per sample; 0 means the default (unlimited in exact
     mode, ceil(M ln M) in approximate mode). */
  uint64_t max_restarts;
  /* Entries kept by the counting cache; 0 disables it. */
  uint64_t memo_capacity;
  /* Smallest acceptable epsilon as "p/q"; NULL means 1/8. */
  const char* eps_min;
  /* When positive, t0 is pinned to this value on an exhaustively verified
     small instance; fails with CTG_FIXTURE_INVALID otherwise. */
  int64_t force_t0;
  /* Wall-clock seconds allowed for exact counting, measured from sampler
     creation; past it, calls fail with CTG_TOO_LARGE. 0 means no limit. */
  double counting_seconds;
} ctg_config;

typedef struct ctg_sampler ctg_sampler;
typedef struct ctg_rng ctg_rng;

CTGEN_API void ctg_config_init(ctg_config* config);

/* Human-readable name of a status code (static storage). */
CTGEN_API const char* ctg_status_string(ctg_status status);
/* Message of the last failure on the calling thread ("" if none). */
CTGEN_API const char* ctg_last_error(void);
/* Releases strings returned through char** out-parameters. */
CTGEN_API void ctg_string_free(char* s);

CTGEN_API ctg_status ctg_rng_create(uint64_t seed, ctg_rng** out);
CTGEN_API void ctg_rng_destroy(ctg_rng* rng);
/* Seed for worker `index` of a pool started from `seed`. */
CTGEN_API uint64_t ctg_derive_seed(uint64_t seed, uint64_t index);

/* Sampler for nonnegative integer tables with the given row and column
   sums. Zero margins are allowed and yield zero rows or columns. */
CTGEN_API ctg_status ctg_table_sampler_create(const int64_t* rows, size_t n_rows,
                                    const int64_t* cols, size_t n_cols,
                                    const ctg_config* config, ctg_sampler** out);
/* Sampler for loopless multigraphs with the given degrees. */
CTGEN_API ctg_status ctg_multigraph_sampler_create(const int64_t* degrees, size_t n,
                                         const ctg_config* config,
                                         ctg_sampler** out);
CTGEN_API void ctg_sampler_destroy(ctg_sampler* sampler);

/* Output shape: rows x cols for tables, n x n adjacency for multigraphs. */
CTGEN_API ctg_status ctg_sampler_shape(const ctg_sampler* sampler, size_t* rows,
                             size_t* cols);
/* Draws one sample into `cells` (row-major, rows*cols entries). */
CTGEN_API ctg_status ctg_sampler_sample(ctg_sampler* sampler, ctg_rng* rng,
                              int64_t* cells, size_t n_cells);
/* Parameters and counters as a JSON object. */
CTGEN_API ctg_status ctg_sampler_stats_json(const ctg_sampler* sampler, char** out);

/* Number of tables with the given margins whose entries of 2 or more sum
   to t, as a decimal string. */
CTGEN_API ctg_status ctg_count(const int64_t* rows, size_t n_rows, const int64_t* cols,
                     size_t n_cols, int64_t t, char** out);
/* Same for loopless multigraphs with the given degrees. */
CTGEN_API ctg_status ctg_count_multigraphs(const int64_t* degrees, size_t n, int64_t t,
                                 char** out);

/* Renders `count` samples of shape rows x cols. kind 0 = tables (CSV rows
   or JSON nested arrays), 1 = multigraphs (upper-triangular CSV or JSON
   edge lists). json selects the format. */
CTGEN_API ctg_status ctg_format_samples(int kind, int json, const int64_t* cells,
                              size_t count, size_t rows, size_t cols,
                              char** out);

/* Runs acceptance criterion `id` (1..10). `report_json` receives the JSON
   report, `lines` one text line per result; `passed` is set to 1 when the
   criterion itself passes. cli_path may be NULL. */
CTGEN_API ctg_status ctg_verify(int id, const char* cli_path, int skip_supplementary,
                      char** report_json, char** lines, int* passed);

#ifdef __cplusplus
}
#endif

#endif
