/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the smart-grid presence-attack dataset generator.
 *
 * All handles are opaque. Functions return an sgr_status; on failure a
 * message for the calling thread is available from sgr_last_error().
 * Strings returned through out-parameters are owned by the caller and must
 * be released with sgr_string_free().
 */
#ifndef SGRECON_H
#define SGRECON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SGR_API __declspec(dllexport)
#else
#define SGR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgr_status {
    SGR_OK = 0,
    SGR_ERR_AUDIT = 1,    /* a gated audit failed */
    SGR_ERR_CONFIG = 2,   /* invalid configuration */
    SGR_ERR_IO = 3,       /* missing, unreadable or malformed files */
    SGR_ERR_ARGUMENT = 4, /* null handle or invalid argument */
    SGR_ERR_INTERNAL = 5
} sgr_status;

typedef enum sgr_split { SGR_SPLIT_TRAIN = 0, SGR_SPLIT_VAL = 1, SGR_SPLIT_TEST = 2 } sgr_split;

typedef struct sgr_config sgr_config;
typedef struct sgr_report sgr_report;

SGR_API const char* sgr_version(void);
/* Message describing the last failure on this thread; empty if none. */
SGR_API const char* sgr_last_error(void);
SGR_API void sgr_string_free(char* s);

SGR_API sgr_status sgr_config_default(sgr_config** out);
SGR_API sgr_status sgr_config_load_file(const char* path, sgr_config** out);
SGR_API sgr_status sgr_config_load_string(const char* json, sgr_config** out);
SGR_API sgr_status sgr_config_set_seed(sgr_config* config, uint64_t seed_base);
SGR_API sgr_status sgr_config_seed(const sgr_config* config, uint64_t* seed_base);
/* Effective configuration as JSON. */
SGR_API sgr_status sgr_config_to_json(const sgr_config* config, char** json);
/* SGR_OK when valid; SGR_ERR_CONFIG with the violations in sgr_last_error(). */
SGR_API sgr_status sgr_config_validate(const sgr_config* config);
SGR_API void sgr_config_free(sgr_config* config);

SGR_API sgr_status sgr_derive_split_seed(uint64_t seed_base, sgr_split split, uint64_t* seed);

SGR_API sgr_status sgr_topology_node_count(const sgr_config* config, size_t* count);
/* Row-major n*n mixing matrix written to `out` (capacity in elements). */
SGR_API sgr_status sgr_topology_mixing(const sgr_config* config, double* out, size_t capacity);

/* Generates a dataset into out_dir. threads = 0 uses all cores.
 * manifest_json (optional) receives the exported files and digests. */
SGR_API sgr_status sgr_generate(const sgr_config* config, const char* out_dir, unsigned threads, char** manifest_json);

/* Audits a dataset directory. On SGR_OK or SGR_ERR_AUDIT a report is
 * returned through `out`; structural failures return SGR_ERR_IO. */
SGR_API sgr_status sgr_validate(const char* dataset_dir, unsigned threads, sgr_report** out);
SGR_API int sgr_report_passed(const sgr_report* report);
SGR_API sgr_status sgr_report_text(const sgr_report* report, char** text);
SGR_API sgr_status sgr_report_json(const sgr_report* report, char** json);
/* Writes validation_report.json, validation_report.txt and shift_quantiles.csv. */
SGR_API sgr_status sgr_report_write(const sgr_report* report, const char* out_dir);
SGR_API void sgr_report_free(sgr_report* report);

/* Trains and evaluates the federated logistic-regression baseline.
 * hyperparams_json (optional) overrides the "baseline" config section.
 * The training seed is train_seed if given, else the configured
 * baseline.train_seed, else derived from seed_base (if given) or the
 * dataset's seed_base. out_dir (optional) receives metrics CSVs and
 * result_json (optional) receives the metrics document. */
SGR_API sgr_status sgr_baseline(const char* dataset_dir, const char* hyperparams_json, const uint64_t* train_seed,
                                const uint64_t* seed_base, const char* out_dir, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* SGRECON_H */
