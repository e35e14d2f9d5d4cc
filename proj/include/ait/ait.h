/*
 * Copyright 2026 The AIT Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the sparse-recovery toolkit: adaptively thresholded
 * Landweber iteration for underdetermined linear systems y = A x, plus the
 * coherence-based convergence bounds and trace verification that certify it.
 *
 * Conventions:
 *  - Every function returns an ait_status (AIT_OK = 0 on success) unless it
 *    returns a constant string. On failure, ait_last_error() describes the
 *    problem for the calling thread.
 *  - Matrices are row-major double arrays; vectors are plain double arrays.
 *  - Objects behind ait_instance / ait_result are immutable once created and
 *    may be shared across threads; creation and destruction are not
 *    synchronized. Free them with the matching *_free function.
 */

#ifndef AIT_AIT_H
#define AIT_AIT_H

#include <stdint.h>

#if defined(_WIN32)
#define AIT_API __declspec(dllexport)
#else
#define AIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ait_status {
    AIT_OK = 0,
    AIT_ERR_INVALID_ARGUMENT = 1,
    AIT_ERR_INVALID_SHAPE = 2,
    AIT_ERR_NOT_UNDERDETERMINED = 3,
    AIT_ERR_ZERO_COLUMN = 4,
    AIT_ERR_DIMENSION_MISMATCH = 5,
    AIT_ERR_NON_FINITE = 6,
    AIT_ERR_NONPOSITIVE_THRESHOLD = 7,
    AIT_ERR_INVALID_RULE = 8,
    AIT_ERR_INVALID_SCAD_A = 9,
    AIT_ERR_INVALID_K = 10,
    AIT_ERR_HYPOTHESIS_VIOLATED = 11,
    AIT_ERR_LOG_DOMAIN = 12,
    AIT_ERR_EMPTY_SUPPORT = 13,
    AIT_ERR_ZERO_ON_SUPPORT = 14,
    AIT_ERR_TOO_LARGE = 15,
    AIT_ERR_NO_SOLUTION = 16,
    AIT_ERR_SINGULAR_REFIT = 17,
    AIT_ERR_INCOMPLETE_TRACE = 18,
    AIT_ERR_IO = 19,
    AIT_ERR_PARSE = 20,
    AIT_ERR_NULL_POINTER = 21,
    AIT_ERR_BUFFER_TOO_SMALL = 22,
    AIT_ERR_NO_TRUTH = 23,
    AIT_ERR_UNKNOWN = 24
} ait_status;

/* Thresholding rule identifiers. */
typedef enum ait_rule_kind {
    AIT_RULE_HARD = 0,
    AIT_RULE_HALF = 1,
    AIT_RULE_TWOTHIRDS = 2,
    AIT_RULE_SOFT = 3,
    AIT_RULE_SCAD = 4
} ait_rule_kind;

/* Halt reasons reported by the solver. */
typedef enum ait_halt_reason {
    AIT_HALT_MAX_ITERATIONS = 0,
    AIT_HALT_STALLED = 1,
    AIT_HALT_SUPPORT_STABLE_AND_STALLED = 2
} ait_halt_reason;

/* Sign patterns for generated ground truths. */
typedef enum ait_sign_rule {
    AIT_SIGNS_RANDOM = 0,
    AIT_SIGNS_POSITIVE = 1
} ait_sign_rule;

typedef struct ait_instance ait_instance; /* opaque: problem instance */
typedef struct ait_result ait_result;     /* opaque: solve result + trace */

/* Library version string, e.g. "1.0.0". */
AIT_API const char* ait_version(void);

/* Stable name of a status code ("ok", "invalid_shape", ...). */
AIT_API const char* ait_status_name(int status);

/* Message of the most recent failure on this thread ("" if none). */
AIT_API const char* ait_last_error(void);

/* ---- Instances ------------------------------------------------------- */

AIT_API ait_status ait_instance_generate(int rows, int cols, int sparsity,
                                         double dynamic_range, int sign_rule,
                                         uint64_t seed, ait_instance** out);

/* Builds an instance from a row-major rows*cols matrix (normalized
 * internally; original column norms recorded), observation y of length rows,
 * and an optional ground-truth signal of length cols (NULL if unknown). */
AIT_API ait_status ait_instance_create(const double* matrix, int rows, int cols,
                                       const double* y, const double* truth_or_null,
                                       ait_instance** out);

AIT_API ait_status ait_instance_load(const char* directory, ait_instance** out);
AIT_API ait_status ait_instance_save(const ait_instance* instance, const char* directory);
AIT_API void ait_instance_free(ait_instance* instance);

AIT_API ait_status ait_instance_dims(const ait_instance* instance, int* rows, int* cols);
/* Normalized matrix entries, row-major, rows*cols doubles. */
AIT_API ait_status ait_instance_matrix(const ait_instance* instance, double* out);
/* Original column norms, cols doubles. */
AIT_API ait_status ait_instance_scales(const ait_instance* instance, double* out);
/* Observation y, rows doubles. */
AIT_API ait_status ait_instance_observation(const ait_instance* instance, double* out);
AIT_API ait_status ait_instance_seed(const ait_instance* instance, uint64_t* out);

AIT_API ait_status ait_instance_has_truth(const ait_instance* instance, int* out);
/* The remaining truth accessors fail with AIT_ERR_NO_TRUTH when absent. */
AIT_API ait_status ait_instance_sparsity(const ait_instance* instance, int* out);
AIT_API ait_status ait_instance_dynamic_range(const ait_instance* instance, double* out);
/* Ground-truth signal in original coordinates, cols doubles. */
AIT_API ait_status ait_instance_truth_signal(const ait_instance* instance, double* out);
/* True support ordered by descending magnitude. Writes min(capacity, k*)
 * indices; *len receives k*. Fails with AIT_ERR_BUFFER_TOO_SMALL if
 * capacity < k* (still setting *len). */
AIT_API ait_status ait_instance_truth_support(const ait_instance* instance, int* out,
                                              int capacity, int* len);

/* Coherence mu, one attaining pair (i < j), and the Welch lower bound.
 * Output pointers may be NULL if not wanted. */
AIT_API ait_status ait_instance_coherence(const ait_instance* instance, double* mu,
                                          int* argmax_i, int* argmax_j, double* welch);

/* ---- Small pure functions -------------------------------------------- */

AIT_API ait_status ait_welch_bound(int rows, int cols, double* out);
/* max|x_i| / min|x_i| over the given support indices. */
AIT_API ait_status ait_dynamic_range_of(const double* x, int n, const int* support,
                                        int support_len, double* out);

/* Parses "hard" | "half" | "twothirds" | "soft" | "scad" | "scad:a=<v>". */
AIT_API ait_status ait_rule_parse(const char* text, int* kind, double* scad_a);
AIT_API ait_status ait_boundedness_constant(int kind, double scad_a, double* out);
AIT_API ait_status ait_threshold_scalar(int kind, double scad_a, double u, double tau,
                                        double* out);
AIT_API ait_status ait_threshold_vector(int kind, double scad_a, const double* z, int n,
                                        double tau, double* out);

/* ---- Solver ----------------------------------------------------------- */

typedef struct ait_solver_config {
    int rule_kind;
    double scad_a;
    int k;                 /* per-iteration nonzero budget, 1 <= k <= N-1 */
    long max_iterations;   /* 0 selects the default 50*k + 100 */
    double stall_tolerance;
    int stable_support_window;
    int keep_full_trace;   /* 1 keep x/z, 0 thin, -1 auto */
} ait_solver_config;

/* Fills defaults for the given sparsity level k (hard rule). */
AIT_API ait_status ait_solver_config_init(ait_solver_config* config, int k);

AIT_API ait_status ait_solve(const ait_instance* instance, const ait_solver_config* config,
                             ait_result** out);
AIT_API void ait_result_free(ait_result* result);

/* Final solution in original coordinates, cols doubles. */
AIT_API ait_status ait_result_final_x(const ait_result* result, double* out);
AIT_API ait_status ait_result_support(const ait_result* result, int* out, int capacity,
                                      int* len);
AIT_API ait_status ait_result_iterations(const ait_result* result, long* out);
AIT_API ait_status ait_result_halt_reason(const ait_result* result, int* out);
AIT_API ait_status ait_result_diverged(const ait_result* result, int* out);
AIT_API ait_status ait_result_trace_len(const ait_result* result, int* out);
AIT_API ait_status ait_result_trace_is_full(const ait_result* result, int* out);

/* One trace record. Any output pointer may be NULL. linf_error is NaN when no
 * truth is known. Support indices as in ait_result_support. */
AIT_API ait_status ait_result_trace_sample(const ait_result* result, int index, int* t,
                                           double* tau, int* support, int support_capacity,
                                           int* support_len, double* linf_error);
/* x^(t) and z^(t) (normalized frame), cols doubles each; full traces only
 * (AIT_ERR_INVALID_ARGUMENT on thinned traces). Either pointer may be NULL. */
AIT_API ait_status ait_result_trace_vectors(const ait_result* result, int index, double* x,
                                            double* z);
AIT_API ait_status ait_result_write_trace_csv(const ait_result* result, const char* path);

/* Errors of final_x against the ground truth, in original coordinates.
 * Either output may be NULL. */
AIT_API ait_status ait_result_errors(const ait_instance* instance, const ait_result* result,
                                     double* linf, double* l2);

/* ---- Convergence theory ----------------------------------------------- */

typedef struct ait_hypothesis_report {
    int theorem1;
    int corollary1;
    double mu_limit;           /* 1/((3+c) k*) */
    double mu_slack;           /* mu_limit - mu */
    double k_upper;            /* 1/((3+c) mu) */
    double k_lower_slack;      /* k - k* */
    double k_upper_slack;      /* k_upper - k */
    double uniqueness_k_limit; /* (1 + 1/mu)/2 */
} ait_hypothesis_report;

AIT_API ait_status ait_contraction_factor(double c, int k, double mu, double* out);
AIT_API ait_status ait_check_hypotheses(double c, int k, int k_star, double mu,
                                        ait_hypothesis_report* out);
AIT_API ait_status ait_iteration_bound(double c, int k, int k_star, double mu,
                                       double dynamic_range, double* out);
AIT_API ait_status ait_detection_budget(double c, int k, double mu, double magnitude_ratio,
                                        double* out);

typedef struct ait_verdict {
    int support_identified_at; /* -1 none, 0 trivial (empty truth), else iteration */
    int within_t_bound;
    int geometric_envelope_ok;
    int recruitment_order_ok;
    int containment_persistent;
    int corollary_applicable;
    int corollary_exact;                /* meaningful when corollary_applicable */
    int envelope_anchor;                /* -1 when no anchor found */
    int envelope_from_identification;   /* stricter anchor-at-identification check */
    double rho;
    double t_bound;                     /* NaN when hypotheses fail */
} ait_verdict;

/* Verifies a solve's recorded trace against the convergence guarantees for
 * the rule/k it was produced with. The instance must carry a ground truth. */
AIT_API ait_status ait_verify_result(const ait_instance* instance, const ait_result* result,
                                     int rule_kind, double scad_a, int k, ait_verdict* out);
/* Same, for a trace CSV written by ait_result_write_trace_csv. */
AIT_API ait_status ait_verify_trace_csv(const ait_instance* instance, const char* trace_path,
                                        int rule_kind, double scad_a, int k,
                                        ait_verdict* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AIT_AIT_H */
