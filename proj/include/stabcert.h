/*
 * stabcert — stability certificates for Metzler matrices and monotone
 * networks. C interface to the shared library: opaque handles, status codes,
 * and JSON payloads. All functions are thread-safe as long as a handle is
 * used by one thread at a time; the error message is thread-local.
 *
 * Strings returned as const char* are owned by the handle they came from and
 * stay valid until that handle is freed.
 */

#ifndef STABCERT_H
#define STABCERT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stabcert_status {
  STABCERT_OK = 0,
  STABCERT_ERR_INVALID_ARGUMENT = 1,
  STABCERT_ERR_PARSE = 2,
  STABCERT_ERR_NOT_METZLER = 3,
  STABCERT_ERR_SINGULAR = 4,
  STABCERT_ERR_TOO_MANY_CYCLES = 5,
  STABCERT_ERR_COMBINATORIAL_BLOWUP = 6,
  STABCERT_ERR_NO_CONVERGENCE = 7,
  STABCERT_ERR_STEP_REJECTED = 8,
  STABCERT_ERR_IO = 9,
  STABCERT_ERR_INTERNAL = 10
} stabcert_status;

typedef enum stabcert_verdict {
  STABCERT_HURWITZ = 0,
  STABCERT_NOT_HURWITZ = 1,
  STABCERT_MARGINAL = 2
} stabcert_verdict;

typedef struct stabcert_config stabcert_config;
typedef struct stabcert_matrix stabcert_matrix;
typedef struct stabcert_report stabcert_report;
typedef struct stabcert_cycle_report stabcert_cycle_report;
typedef struct stabcert_expansion stabcert_expansion;
typedef struct stabcert_netspec stabcert_netspec;
typedef struct stabcert_certificate stabcert_certificate;
typedef struct stabcert_trajectory stabcert_trajectory;

const char* stabcert_version(void);

/* Message for the most recent failure on the calling thread. */
const char* stabcert_last_error(void);

/* ---- analysis configuration ------------------------------------------- */

stabcert_config* stabcert_config_new(void);
void stabcert_config_free(stabcert_config* cfg);
stabcert_status stabcert_config_set_tolerance(stabcert_config* cfg, double tolerance);
stabcert_status stabcert_config_set_cycle_cap(stabcert_config* cfg, size_t cap);
stabcert_status stabcert_config_set_family_cap(stabcert_config* cfg, size_t cap);
stabcert_status stabcert_config_set_seed(stabcert_config* cfg, unsigned long long seed);

/* ---- matrices ---------------------------------------------------------- */

/* Row-major n*n data. */
stabcert_status stabcert_matrix_from_data(size_t n, const double* rowmajor,
                                          stabcert_matrix** out);
/* Accepts the plain-text format (first line n, then n rows) or the JSON
 * object {"n": ..., "rows": [[...], ...]}. */
stabcert_status stabcert_matrix_parse(const char* text, stabcert_matrix** out);
stabcert_status stabcert_matrix_load(const char* path, stabcert_matrix** out);
void stabcert_matrix_free(stabcert_matrix* m);

size_t stabcert_matrix_dim(const stabcert_matrix* m);
/* 0-based indices. */
stabcert_status stabcert_matrix_get(const stabcert_matrix* m, size_t i, size_t j, double* out);
/* Plain-text rendering, cached in the handle. */
const char* stabcert_matrix_text(stabcert_matrix* m);

/* ---- stability analysis ------------------------------------------------ */

stabcert_status stabcert_analyze(const stabcert_matrix* m, const stabcert_config* cfg,
                                 stabcert_report** out);
stabcert_verdict stabcert_report_verdict(const stabcert_report* rep);
int stabcert_report_consistent(const stabcert_report* rep);
const char* stabcert_report_json(const stabcert_report* rep);
void stabcert_report_free(stabcert_report* rep);

/* ---- cycle structure ---------------------------------------------------- */

stabcert_status stabcert_cycles(const stabcert_matrix* m, const stabcert_config* cfg,
                                stabcert_cycle_report** out);
const char* stabcert_cycle_report_json(const stabcert_cycle_report* rep);
void stabcert_cycle_report_free(stabcert_cycle_report* rep);

/* ---- graph expansion ---------------------------------------------------- */

stabcert_status stabcert_expand(const stabcert_matrix* m, stabcert_expansion** out);
/* Borrowed; freed together with the expansion handle. */
stabcert_matrix* stabcert_expansion_matrix(const stabcert_expansion* e);
const char* stabcert_expansion_origin_json(const stabcert_expansion* e);
/* 1 when eliminating the added nodes recovers the original matrix. */
int stabcert_expansion_contract_check(const stabcert_expansion* e);
void stabcert_expansion_free(stabcert_expansion* e);

/* ---- monotone network certification ------------------------------------ */

stabcert_status stabcert_netspec_parse(const char* json_text, stabcert_netspec** out);
stabcert_status stabcert_netspec_load(const char* path, stabcert_netspec** out);
size_t stabcert_netspec_dim(const stabcert_netspec* spec);
void stabcert_netspec_free(stabcert_netspec* spec);

#define STABCERT_METHOD_SUM 0
#define STABCERT_METHOD_MAX 1

stabcert_status stabcert_certify(const stabcert_netspec* spec, int method,
                                 const stabcert_config* cfg, stabcert_certificate** out);
/* 1 certified, 0 not certified. */
int stabcert_certificate_valid(const stabcert_certificate* cert);
const char* stabcert_certificate_json(const stabcert_certificate* cert);
void stabcert_certificate_free(stabcert_certificate* cert);

/* ---- simulation --------------------------------------------------------- */

/* u_const may be NULL for zero input. */
stabcert_status stabcert_simulate_linear(const stabcert_matrix* m, const double* x0, size_t n,
                                         const double* u_const, double horizon, double step,
                                         stabcert_trajectory** out);
stabcert_status stabcert_simulate_network(const stabcert_netspec* spec, const double* x0,
                                          size_t n, double horizon, double step,
                                          stabcert_trajectory** out);
const char* stabcert_trajectory_csv(stabcert_trajectory* traj);
/* Sum-gain trajectory-bound check of the recorded run against the matrix it
 * was produced from; JSON summary cached in the trajectory handle. NULL on
 * error (see stabcert_last_error). */
const char* stabcert_trajectory_iss_summary(stabcert_trajectory* traj,
                                            const stabcert_matrix* m);
void stabcert_trajectory_free(stabcert_trajectory* traj);

#ifdef __cplusplus
}
#endif

#endif /* STABCERT_H */
