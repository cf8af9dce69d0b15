#ifndef MASLOV_H
#define MASLOV_H

/* C interface to the Morse index library.
 *
 * Every fallible call returns a status code (0 = success). On failure the
 * thread-local message from maslov_last_error() describes what went wrong.
 * Structured results come back as JSON text in heap strings owned by the
 * caller; release them with maslov_string_free. Handles are opaque and must
 * be released with their matching _free function.
 */

#ifdef __cplusplus
extern "C" {
#endif

enum {
  MASLOV_OK = 0,
  MASLOV_ERR_DIMENSION_MISMATCH = 1,
  MASLOV_ERR_RANK_DEFICIENT = 2,
  MASLOV_ERR_NOT_ISOTROPIC = 3,
  MASLOV_ERR_INCONSISTENT_INDEX = 4,
  MASLOV_ERR_EMPTY_KERNEL = 5,
  MASLOV_ERR_NON_REGULAR_CROSSING = 6,
  MASLOV_ERR_DEGENERATE_ENDPOINT = 7,
  MASLOV_ERR_SINGULAR_P = 8,
  MASLOV_ERR_NOT_HYPERBOLIC = 9,
  MASLOV_ERR_NO_DECAY = 10,
  MASLOV_ERR_INTEGRATOR_FAILURE = 11,
  MASLOV_ERR_ISOTROPY_LOSS = 12,
  MASLOV_ERR_UNRESOLVED_CLUSTER = 13,
  MASLOV_ERR_HYPOTHESIS_VIOLATION = 14,
  MASLOV_ERR_PLATEAU_FAILURE = 15,
  MASLOV_ERR_UNSTABLE_COUNT = 16,
  MASLOV_ERR_NOT_IN_BUNDLE = 17,
  MASLOV_ERR_NEWTON_DIVERGENCE = 18,
  MASLOV_ERR_PHASE_CONDITION_SINGULAR = 19,
  MASLOV_ERR_NOT_EQUILIBRIUM = 20,
  MASLOV_ERR_TANGENTIAL_ZERO = 21,
  MASLOV_ERR_PARSE = 22,
  MASLOV_ERR_IO = 23,
  MASLOV_ERR_INVALID_ARGUMENT = 24,
  MASLOV_ERR_INTERNAL = 25
};

typedef struct maslov_problem maslov_problem;
typedef struct maslov_wave maslov_wave;

/* Library version as "major.minor.patch". Static storage, do not free. */
const char* maslov_version(void);

/* Message for this thread's most recent failure (empty if none). The buffer
 * stays valid until the next failing call on the same thread; do not free. */
const char* maslov_last_error(void);

/* Release a string returned through a char** output parameter. */
void maslov_string_free(char* s);

/* ---- Sturm-Liouville problems -------------------------------------- */

/* Parse a problem document; schema documented in the README. */
int maslov_problem_from_json(const char* text, maslov_problem** out);
int maslov_problem_from_file(const char* path, maslov_problem** out);
void maslov_problem_free(maslov_problem* p);

/* Space dimension n, or -1 on a null handle. */
int maslov_problem_dim(const maslov_problem* p);

/* Check the standing hypotheses (coefficient regularity, limit behavior,
 * hyperbolicity). Fills a JSON report; returns MASLOV_OK even when the
 * report says the hypotheses fail, and an error only if the probe itself
 * cannot run. */
int maslov_validate(const maslov_problem* p, char** out_json);

/* Morse index by conjugate-point counting. options_json may be NULL or an
 * object with any of:
 *   propagation: {rel_tol, abs_tol, reortho_every, trunc_eps, t_min, t_max,
 *                 sample_dt}
 *   detect:      {sigma_threshold, dip_threshold, width_rel}
 *   plateau:     bool, recompute on a doubled window (default true)
 *   crosscheck:  bool, independent arc-count route (default true)
 *   gauge_seed:  integer, random gauge on the initial frame
 *   window:      [a, b], force the truncation window
 *   oracle:      {t_o, n_interior, richardson_levels, zero_sentinel,
 *                 deflate_below}; when present the finite element count runs
 *                 and must match the index (deflate_below shifts the
 *                 comparison threshold for problems with a known kernel)
 *   diagnostics_csv: path for the per-sample detection table
 *   frames_csv:  path for the propagated frame path
 *   inject_index_offset: integer added to the computed index before the
 *                 oracle comparison (fault-injection hook for testing the
 *                 mismatch path; leave unset otherwise)
 * On an oracle mismatch the call fails with MASLOV_ERR_PLATEAU_FAILURE. */
int maslov_morse(const maslov_problem* p, const char* options_json, char** out_json);

/* Finite element negative-eigenvalue count on a Dirichlet box, with the
 * refinement-level agreement check. options_json may be NULL or
 *   {t_o, n_interior, richardson_levels, zero_sentinel, deflate_below,
 *    k, eigenvalues_csv}
 * where k > 0 additionally reports the k smallest eigenvalues (and writes
 * them as CSV when a path is given). */
int maslov_oracle(const maslov_problem* p, const char* options_json, char** out_json);

/* ---- Traveling waves ------------------------------------------------ */

/* Solve the profile equation for a front or pulse. job_json schema is in
 * the README (system, c_guess, u_minus, u_plus, optional bvp overrides). */
int maslov_wave_solve(const char* job_json, maslov_wave** out);
void maslov_wave_free(maslov_wave* w);

/* Basic facts about a solved wave: {c, kind, residual_sup, half_width,
 * points, n}. */
int maslov_wave_info(const maslov_wave* w, char** out_json);

/* Profile samples as CSV (xi, components of w, components of w'). */
int maslov_wave_profile_csv(const maslov_wave* w, const char* path);

/* Instability analysis: critical points of the tangential derivative, the
 * Morse index of the weighted linearization, and the verdict. options_json
 * may be NULL or {crit_tol, compute_morse, propagation: {...},
 * morse: {detect: {...}, plateau, crosscheck, gauge_seed, window}}. */
int maslov_wave_analyze(const maslov_wave* w, const char* options_json, char** out_json);

/* The weighted linearized operator around the wave, as a problem handle. */
int maslov_wave_weighted_problem(const maslov_wave* w, maslov_problem** out);

/* ---- Lagrangian plane indices --------------------------------------- */

/* Pointwise index computations on explicit frames. frames_json holds 2n x n
 * row-major arrays; `which` selects the computation:
 *   "triple":    {n, alpha, beta, kappa} -> triple index, both routes
 *   "hormander": {n, l1, l2, k1, k2} -> relative pair index, both routes
 *   "maslov":    {n, reference, taus, path: [frame, ...]} -> path index
 *                against the reference, with the crossing table
 * Route disagreement fails with MASLOV_ERR_INCONSISTENT_INDEX. */
int maslov_indices(const char* frames_json, const char* which, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* MASLOV_H */
