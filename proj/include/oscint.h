#ifndef OSCINT_H
#define OSCINT_H

/*
 * C interface to the oscint library.
 *
 * Every function returns an oscint_status. On failure the message is
 * available from oscint_last_error() on the calling thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * oscint_string_free(). Options are passed as JSON object text; NULL or ""
 * means all defaults.
 */

#include <stddef.h>

#if defined(OSCINT_BUILDING_LIBRARY)
#define OSCINT_API __attribute__((visibility("default")))
#else
#define OSCINT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum oscint_status {
  OSCINT_OK = 0,
  OSCINT_ERR_PARSE = 1,
  OSCINT_ERR_DIMENSION = 2,
  OSCINT_ERR_DOMAIN = 3,
  OSCINT_ERR_INCOMPATIBLE = 4,
  OSCINT_ERR_NOT_CONVERGED = 5,
  OSCINT_ERR_IO = 6,
  OSCINT_ERR_INTERNAL = 7,
  OSCINT_ERR_ARGUMENT = 8,
  OSCINT_ERR_PRECONDITION = 9
} oscint_status;

typedef struct oscint_phase oscint_phase;

OSCINT_API const char* oscint_version(void);
OSCINT_API const char* oscint_last_error(void);
OSCINT_API void oscint_string_free(char* s);

/* Phase construction. nx/nz of -1 in from_expr are inferred. */
OSCINT_API oscint_status oscint_phase_from_json(const char* json, oscint_phase** out);
OSCINT_API oscint_status oscint_phase_from_expr(const char* expr, int nx, int nz, oscint_phase** out);
OSCINT_API oscint_status oscint_phase_example(const char* name, oscint_phase** out);
OSCINT_API void oscint_phase_free(oscint_phase* p);
OSCINT_API oscint_status oscint_phase_dims(const oscint_phase* p, int* nx, int* nz, int* m);
OSCINT_API oscint_status oscint_phase_to_json(const oscint_phase* p, char** out);
OSCINT_API oscint_status oscint_phase_to_expr(const oscint_phase* p, char** out);
OSCINT_API int oscint_phase_equal(const oscint_phase* a, const oscint_phase* b);

/* Mixed Hessian as a JSON grid, and its inverse. */
OSCINT_API oscint_status oscint_hessian(const oscint_phase* p, char** out_json);
OSCINT_API oscint_status oscint_hessian_inverse(const char* hessian_json, oscint_phase** out);

/*
 * Structural checks: full rank, rank one, and for (2+2) cubics the four
 * nondegeneracy hypotheses plus the conic geometry.
 * Options: grid_points, certify, cell_tol, max_cells.
 */
OSCINT_API oscint_status oscint_check(const oscint_phase* p, const char* options, char** out_json);

/* Newton distance. Options: modified, samples, seed, threads. */
OSCINT_API oscint_status oscint_newton(const oscint_phase* p, const char* options, char** out_json);

/* Decay-rate prediction. Options as for oscint_check. */
OSCINT_API oscint_status oscint_predict(const oscint_phase* p, const char* options, char** out_json);

/* Pencil x1 phi1(z) + x2 phi2(z) from two binary forms ("1,0,-1" or "z1^2 - z2^2"). */
OSCINT_API oscint_status oscint_pencil(const char* phi1, const char* phi2, char** out_json);

/*
 * Single norm estimate at one lambda.
 * Options: n, tol, max_iter, seed, threads, box, amplitude, witness.
 */
OSCINT_API oscint_status oscint_norm(const oscint_phase* p, double lambda, const char* options,
                                     char** out_json);

/*
 * Lambda sweep with a log-log fit. Options: lambda_min, lambda_max, points
 * (or lambdas), grid ("auto" or an integer), n_min, n_max, max_entries, tol,
 * max_iter, seed, threads, box, amplitude, refine, drop. Any of out_csv and
 * out_plot may be NULL. *unresolved receives the number of rows left out.
 */
OSCINT_API oscint_status oscint_sweep(const oscint_phase* p, const char* options, char** out_json,
                                      char** out_csv, char** out_plot, int* unresolved);

/* Fit of a sweep CSV (resolved rows only). */
OSCINT_API oscint_status oscint_fit_csv(const char* csv, double drop_fraction, char** out_json);

/* Random-phase genericity batch. Options: nx, nz, m, trials, seed, threads, grid_points, certify. */
OSCINT_API oscint_status oscint_genericity(const char* options, char** out_json);

/* The built-in example phases with their predictions. */
OSCINT_API oscint_status oscint_examples(char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* OSCINT_H */
