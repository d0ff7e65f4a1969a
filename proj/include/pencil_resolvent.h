/*
 * C interface to the pencil-resolvent library.
 *
 * Complex matrices cross this boundary as row-major interleaved doubles:
 * entry (i, j) of an n x n matrix occupies out[2*(i*n + j)] (real part) and
 * out[2*(i*n + j) + 1] (imaginary part); buffers hold 2*n*n doubles.
 *
 * Every function returning pr_status leaves a human-readable message for the
 * most recent failure in pr_last_error() (thread-local).
 */
#ifndef PENCIL_RESOLVENT_H
#define PENCIL_RESOLVENT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pr_status {
  PR_OK = 0,
  PR_ERR_INVALID_SHAPE = 1,
  PR_ERR_INVALID_PARAMS = 2,
  PR_ERR_EMPTY_WINDOW = 3,
  PR_ERR_MISSING_COEFFICIENT = 4,
  PR_ERR_SINGULAR_SHIFT = 5,
  PR_ERR_BLOCKED = 6,
  PR_ERR_EMPTY_SUBSPACE = 7,
  PR_ERR_NOT_COMPLEMENTARY = 8,
  PR_ERR_NOT_INVERTIBLE_ON_SUBSPACE = 9,
  PR_ERR_SINGULAR_NODE = 10,
  PR_ERR_OUTSIDE_ANNULUS = 11,
  PR_ERR_RESAMPLE_LIMIT = 12,
  PR_ERR_NO_REFERENCE = 13,
  PR_ERR_PARSE = 14,
  PR_ERR_IO = 15,
  PR_ERR_INTERNAL = 16
} pr_status;

const char* pr_status_name(pr_status status);
/* Exit code a command-line tool should use for this status (0 for PR_OK). */
int32_t pr_status_exit_code(pr_status status);
/* Message describing the most recent failure on this thread. */
const char* pr_last_error(void);

typedef struct pr_pencil pr_pencil;
typedef struct pr_decomposition pr_decomposition;
typedef struct pr_basic_solution pr_basic_solution;
typedef struct pr_expansion pr_expansion;

typedef struct pr_tolerances {
  double rank_rel;
  double residual_abs;
  double angle_tol;
} pr_tolerances;

void pr_tolerances_default(pr_tolerances* out);

/* outer may be HUGE_VAL for an unbounded annulus */
typedef struct pr_annulus {
  double inner;
  double outer;
} pr_annulus;

/* ---- pencils ---------------------------------------------------------- */

pr_status pr_pencil_create(int32_t n, const double* a0, const double* a1, pr_pencil** out);
/* pencil_json is the document "pencil" object without the family key, e.g.
 * {"truncation": 12, "params": {"beta": [2.0, 0.0]}}; NULL for defaults. */
pr_status pr_pencil_from_family(const char* family, const char* pencil_json, pr_pencil** out);
void pr_pencil_free(pr_pencil* p);
int32_t pr_pencil_dim(const pr_pencil* p);
pr_status pr_pencil_matrix(const pr_pencil* p, int32_t which /* 0 = A0, 1 = A1 */, double* out);
pr_status pr_pencil_eval(const pr_pencil* p, double re, double im, double* out);
pr_status pr_pencil_flip(const pr_pencil* p, pr_pencil** out);

/* ---- chains ----------------------------------------------------------- */

/* ascent/descent set to -1 when the value exceeds the probe limit */
pr_status pr_ascent_descent(const pr_pencil* p, int32_t probe_limit, const pr_tolerances* tol,
                            int32_t* ascent, int32_t* descent);

/* kind: 0 = singular, 1 = regular */
pr_status pr_generating_subspace(const pr_pencil* p, int32_t kind, int32_t depth,
                                 double rate_threshold, const pr_tolerances* tol,
                                 int32_t* dim_out, double* basis_out, int32_t basis_capacity);

/* ---- spectral decomposition ------------------------------------------- */

pr_status pr_decompose(const pr_pencil* p, pr_annulus target, int32_t depth,
                       const pr_tolerances* tol, pr_decomposition** out);
void pr_decomposition_free(pr_decomposition* d);
pr_status pr_decomposition_dims(const pr_decomposition* d, int32_t* dim_xs, int32_t* dim_xr);
/* which: 0 = P, 1 = Pc, 2 = Q, 3 = Qc */
pr_status pr_decomposition_matrix(const pr_decomposition* d, int32_t which, double* out);
pr_status pr_theorem2_deviation(const pr_pencil* p, const pr_decomposition* d,
                                double* max_deviation);

/* ---- basic solution and Laurent coefficients --------------------------- */

pr_status pr_solve_basic(const pr_pencil* p, const pr_decomposition* d,
                         const pr_tolerances* tol, pr_basic_solution** out);
void pr_basic_solution_free(pr_basic_solution* b);
/* which: 0 = R_-1, 1 = R_0 */
pr_status pr_basic_solution_matrix(const pr_basic_solution* b, int32_t which, double* out);
pr_status pr_basic_solution_annulus(const pr_basic_solution* b, pr_annulus* out);
pr_status pr_closed_form_eval(const pr_basic_solution* b, const pr_pencil* p, double re,
                              double im, double* out);

pr_status pr_laurent_coeffs(const pr_basic_solution* b, const pr_pencil* p, int32_t k_max,
                            int32_t l_max, pr_expansion** out);
pr_status pr_contour_oracle(const pr_pencil* p, double radius, int32_t nodes, int32_t j_min,
                            int32_t j_max, const pr_tolerances* tol, pr_expansion** out);
void pr_expansion_free(pr_expansion* e);
pr_status pr_expansion_range(const pr_expansion* e, int32_t* j_min, int32_t* j_max);
pr_status pr_expansion_coeff(const pr_expansion* e, int32_t j, double* out);
pr_status pr_expansion_annulus(const pr_expansion* e, pr_annulus* out);
pr_status pr_expansion_eval(const pr_expansion* e, double re, double im, double* out,
                            double* tail_bound /* may be NULL */);
pr_status pr_fundamental_residuals(const pr_pencil* p, const pr_expansion* e,
                                   int32_t interior_margin, double* max_left,
                                   double* max_right);
pr_status pr_expansion_growth_csv(const pr_expansion* e, const char* path);

/* ---- closed-form references ------------------------------------------- */

/* region: 0 = near zero, 1 = near infinity; which: 0..5 = P, Pc, Q, Qc, R_-1, R_0 */
pr_status pr_reference_matrix(const char* family, const char* pencil_json, int32_t region,
                              int32_t which, double* out);

/* ---- document runner (the CLI backend) --------------------------------- */

/* command: analyze | chains | project | solve | laurent | validate | reproduce.
 * options_json (may be NULL): {"region": "near-zero"|"near-infinity",
 * "probe_limit": 10, "depth": 24, "k_max": 20, "l_max": 20, "out": "path",
 * "json": false}.  On success *report_out is a malloc'd string (free with
 * pr_string_free) and *exit_code is 0 iff every reported check passed. */
pr_status pr_run_command(const char* command, const char* document_json,
                         const char* options_json, char** report_out, int32_t* exit_code);
void pr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PENCIL_RESOLVENT_H */
