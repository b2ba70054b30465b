/*
 * qhfmp — quantum-inspired hashing with parity-dependent walks with memory.
 *
 * C interface to the shared library. All objects are opaque handles created
 * and destroyed through this API; every fallible call returns a qhfmp_status
 * and leaves a human-readable detail string in qhfmp_last_error() (thread
 * local, valid until the next failing call on the same thread).
 */
#ifndef QHFMP_H
#define QHFMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QHFMP_API __declspec(dllexport)
#else
#define QHFMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qhfmp_status {
  QHFMP_OK = 0,
  QHFMP_ERROR_INVALID_ARGUMENT = 1,
  QHFMP_ERROR_IO = 2,
  QHFMP_ERROR_NUMERIC = 3,
  QHFMP_ERROR_INTERNAL = 4,
} qhfmp_status;

typedef struct qhfmp_params qhfmp_params;
typedef struct qhfmp_report qhfmp_report;

QHFMP_API const char* qhfmp_version(void);
QHFMP_API const char* qhfmp_status_name(qhfmp_status status);
QHFMP_API const char* qhfmp_last_error(void);

/* Frees strings returned through char** out-parameters. */
QHFMP_API void qhfmp_string_free(char* text);

/*
 * Parameters. Standard instances are "QHFM-P-296" and "QHFM-P-264" (the
 * output length alone is also accepted). Explicit creation takes the node
 * count n (odd), bits per block m, probability digits l and the three angles
 * in radians. Angles outside (0, pi/2) are accepted with a warning, readable
 * via qhfmp_params_warnings (empty string when none).
 */
QHFMP_API qhfmp_status qhfmp_params_standard(const char* name, qhfmp_params** out);
QHFMP_API qhfmp_status qhfmp_params_create(int n, int m, int l, double theta0, double theta1,
                                           double alpha, qhfmp_params** out);
QHFMP_API qhfmp_status qhfmp_params_from_json(const char* json_text, qhfmp_params** out);
QHFMP_API void qhfmp_params_free(qhfmp_params* params);

QHFMP_API qhfmp_status qhfmp_params_to_json(const qhfmp_params* params, char** out_json);
QHFMP_API const char* qhfmp_params_warnings(const qhfmp_params* params);
QHFMP_API int qhfmp_params_digest_bits(const qhfmp_params* params);
QHFMP_API int qhfmp_params_digest_bytes(const qhfmp_params* params);

/* Parses "pi/4"-style fraction strings or decimal radians. */
QHFMP_API qhfmp_status qhfmp_parse_angle(const char* text, double* out_radians);

/*
 * Hashing. qhfmp_hash writes the digest byte view (leading zero bits pad the
 * first byte when n*m is not a multiple of 8); the buffer must hold
 * qhfmp_params_digest_bytes() bytes. qhfmp_hash_hex returns uppercase hex,
 * space-separated between bytes when pretty is nonzero.
 */
QHFMP_API qhfmp_status qhfmp_hash(const qhfmp_params* params, const uint8_t* data, size_t size,
                                  uint8_t* digest, size_t digest_capacity, size_t* digest_size);
QHFMP_API qhfmp_status qhfmp_hash_hex(const qhfmp_params* params, const uint8_t* data, size_t size,
                                      int pretty, char** out_hex);

/* Final walk distribution over the n cycle nodes; probs must hold n doubles. */
QHFMP_API qhfmp_status qhfmp_distribution(const qhfmp_params* params, const uint8_t* data,
                                          size_t size, double* probs, size_t probs_capacity);

/*
 * Statistical suites. Messages are synthetic uniform random bit strings of
 * synthetic_bits bits unless dataset_path names a JSON-lines file, in which
 * case each trial hashes the UTF-8 text of dataset_field (default
 * "abstract") from a record drawn with replacement. A fixed seed makes the
 * run bit-reproducible for any thread count (threads = 0 uses all cores).
 */
typedef struct qhfmp_trial_config {
  uint64_t seed;
  uint32_t trials;
  uint32_t synthetic_bits;   /* used when dataset_path is NULL */
  const char* dataset_path;  /* optional */
  const char* dataset_field; /* optional, defaults to "abstract" */
  uint32_t threads;          /* 0 = hardware concurrency */
} qhfmp_trial_config;

QHFMP_API qhfmp_status qhfmp_run_diffusion(const qhfmp_params* params,
                                           const qhfmp_trial_config* config, qhfmp_report** out);
QHFMP_API qhfmp_status qhfmp_run_uniform(const qhfmp_params* params,
                                         const qhfmp_trial_config* config, qhfmp_report** out);
QHFMP_API qhfmp_status qhfmp_run_collision(const qhfmp_params* params,
                                           const qhfmp_trial_config* config, qhfmp_report** out);
QHFMP_API qhfmp_status qhfmp_run_sensitivity(const qhfmp_params* params,
                                             const qhfmp_trial_config* config, qhfmp_report** out);

typedef void (*qhfmp_progress_fn)(uint32_t done, uint32_t total, void* user);

/*
 * Coin-angle stability sweep over theta0, theta1 = k * pi / (2 * divisions),
 * k = 1, 1 + grid_step, ... <= divisions - 1. Pass k0 = k1 = 0 to sweep the
 * whole grid, or a valid pair to evaluate a single cell. params supplies n,
 * m, l and alpha; its coin angles are ignored.
 */
QHFMP_API qhfmp_status qhfmp_run_sweep(const qhfmp_params* params,
                                       const qhfmp_trial_config* config, uint32_t divisions,
                                       uint32_t grid_step, int k0, int k1,
                                       qhfmp_progress_fn progress, void* user,
                                       qhfmp_report** out);

/*
 * Reports render as JSON (full precision, schema_version field) and CSV (one
 * row per trial, bit position, hit count or grid cell depending on the
 * suite). Returned pointers stay owned by the report.
 */
QHFMP_API const char* qhfmp_report_json(const qhfmp_report* report);
QHFMP_API const char* qhfmp_report_csv(const qhfmp_report* report);
QHFMP_API void qhfmp_report_free(qhfmp_report* report);

/* Canonical published test vectors (JSON document; stable across releases). */
QHFMP_API qhfmp_status qhfmp_vectors_json(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* QHFMP_H */
