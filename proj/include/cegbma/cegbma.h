/*
 * C interface to the cegbma library: event trees, hyperstages, Dirichlet
 * scoring, and the fit / average / enumerate / simulate / export workflows.
 *
 * All objects are opaque handles released with the matching *_free call.
 * Functions return a ceg_status; on failure ceg_last_error() describes the
 * problem (thread-local, valid until the next failing call on that thread).
 * Strings returned from a handle live as long as the handle.
 */
#ifndef CEGBMA_H
#define CEGBMA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CEGBMA_BUILDING)
#    define CEG_API __declspec(dllexport)
#  else
#    define CEG_API __declspec(dllimport)
#  endif
#else
#  define CEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum ceg_status {
    CEG_OK = 0,
    CEG_ERR_ARGUMENT = 1,   /* bad option or null handle */
    CEG_ERR_INPUT = 2,      /* unreadable or malformed input */
    CEG_ERR_VALIDATION = 3, /* hyperstage violates the tree's constraints */
    CEG_ERR_CAPACITY = 4,   /* combined model count or enumeration cap exceeded */
    CEG_ERR_INTERNAL = 5
} ceg_status;

typedef struct ceg_tree ceg_tree;
typedef struct ceg_hyperstage ceg_hyperstage;
typedef struct ceg_result ceg_result;

CEG_API const char* ceg_version(void);
CEG_API const char* ceg_last_error(void);

/* ---- event trees ------------------------------------------------------- */

/* records: n_records paths; path i has lengths[i] labels starting at
 * labels[offset_i], offsets being the running sum of lengths. */
CEG_API ceg_status ceg_tree_from_records(const char* const* labels, const size_t* lengths, size_t n_records,
                                         ceg_tree** out);
CEG_API ceg_status ceg_tree_from_csv(const char* path, int has_header, ceg_tree** out);
/* Declared structure from a JSON tree spec; counts from data_path (CSV) when
 * given, otherwise from the spec's own counts. */
CEG_API ceg_status ceg_tree_from_spec(const char* spec_path, const char* data_path, int has_header, ceg_tree** out);
CEG_API void ceg_tree_free(ceg_tree* tree);

CEG_API size_t ceg_tree_vertex_count(const ceg_tree* tree);
CEG_API size_t ceg_tree_situation_count(const ceg_tree* tree);
CEG_API uint64_t ceg_tree_total_count(const ceg_tree* tree);
CEG_API size_t ceg_tree_out_degree(const ceg_tree* tree, size_t vertex);
CEG_API ceg_status ceg_tree_edge(const ceg_tree* tree, size_t vertex, size_t edge, const char** label, size_t* head,
                                 uint64_t* count);

/* ---- hyperstages ------------------------------------------------------- */

CEG_API ceg_status ceg_hyperstage_default(const ceg_tree* tree, ceg_hyperstage** out);
CEG_API ceg_status ceg_hyperstage_from_file(const ceg_tree* tree, const char* path, ceg_hyperstage** out);
CEG_API void ceg_hyperstage_free(ceg_hyperstage* hyperstage);

CEG_API size_t ceg_hyperstage_block_count(const ceg_hyperstage* hyperstage);
CEG_API size_t ceg_hyperstage_block_size(const ceg_hyperstage* hyperstage, size_t block);
/* Returns CEG_ERR_VALIDATION when violations exist; *violations (optional)
 * receives a newline-separated list owned by the hyperstage handle. */
CEG_API ceg_status ceg_hyperstage_validate(const ceg_tree* tree, ceg_hyperstage* hyperstage,
                                           const char** violations);
/* Product of Bell numbers of the block sizes. */
CEG_API ceg_status ceg_model_space_size(const ceg_hyperstage* hyperstage, uint64_t* out);

/* ---- scoring ----------------------------------------------------------- */

CEG_API ceg_status ceg_stage_log_score(const double* alpha, const uint64_t* counts, size_t dim, double* out);
CEG_API ceg_status ceg_merge_log_bf(const double* alpha_a, const uint64_t* counts_a, const double* alpha_b,
                                    const uint64_t* counts_b, size_t dim, double* out);
CEG_API ceg_status ceg_bell(unsigned n, uint64_t* out);

/* ---- workflows --------------------------------------------------------- */

typedef struct ceg_options {
    double alpha_bar;           /* required, > 0 */
    double beta;                /* default 20 */
    unsigned k;                 /* default 100 */
    double epsilon;             /* default 0 */
    uint64_t seed;              /* default 0 */
    size_t max_combined_models; /* default 100000 */
    int global_window;          /* default 0 */
    int all_pairs_pool;         /* default 0: normalize over improving merges */
    unsigned threads;           /* 0: hardware concurrency; CEG_ENSEMBLE_THREADS caps it */
    size_t hyperset;            /* enumerate only */
    const char* run_id;         /* artifact prefix; NULL uses the command */
    /* Recorded in the manifest only. */
    const char* data_path;
    const char* tree_spec_path;
    const char* hyperstage_path;
    int has_header;
} ceg_options;

CEG_API void ceg_options_init(ceg_options* options);

CEG_API ceg_status ceg_fit(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                           ceg_result** out);
CEG_API ceg_status ceg_average(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                               ceg_result** out);
CEG_API ceg_status ceg_enumerate(const ceg_tree* tree, const ceg_hyperstage* hyperstage, const ceg_options* options,
                                 ceg_result** out);

/* Runs a manifest (JSON text): loads its inputs and dispatches on "command".
 * threads = 0 uses hardware concurrency; CEG_ENSEMBLE_THREADS caps it. */
CEG_API ceg_status ceg_run_manifest(const char* manifest_json, unsigned threads, ceg_result** out);
CEG_API ceg_status ceg_simulate(const char* model_json, size_t n, uint64_t seed, ceg_result** out);
CEG_API ceg_status ceg_export(const char* report_json, ceg_result** out);

CEG_API size_t ceg_result_count(const ceg_result* result);
CEG_API const char* ceg_result_name(const ceg_result* result, size_t index);
CEG_API const char* ceg_result_text(const ceg_result* result, size_t index);
/* Artifact whose name ends with suffix, or NULL. */
CEG_API const char* ceg_result_find(const ceg_result* result, const char* suffix);
CEG_API void ceg_result_free(ceg_result* result);

#ifdef __cplusplus
}
#endif

#endif /* CEGBMA_H */
