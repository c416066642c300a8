/*
 * bohmpair — de Broglie–Bohm description of an entangled qubit pair
 * (two spin-1/2 rigid rotors).
 *
 * C API of the shared library.  All functions return a bq_status; results go
 * through out-parameters.  Opaque handles are created and destroyed with the
 * matching _new/_free calls and are not thread-safe individually, but distinct
 * handles may be used from distinct threads.  Computations themselves are
 * internally parallel and deterministic: a fixed configuration and seed give
 * byte-identical serialized results for any thread count.
 */

#ifndef BOHMPAIR_H
#define BOHMPAIR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BQ_API __declspec(dllexport)
#else
#define BQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bq_status {
  BQ_OK = 0,
  BQ_ERR_INVALID_ARGUMENT = 1,  /* bad parameter or domain violation */
  BQ_ERR_NODE = 2,              /* configuration on a node of the guiding wave */
  BQ_ERR_POLE = 3,              /* |sin alpha| below the pole threshold */
  BQ_ERR_EMPTY_ENSEMBLE = 4,
  BQ_ERR_ENVELOPE = 5,          /* rejection-sampling envelope violated (bug guard) */
  BQ_ERR_STENCIL = 6,           /* finite-difference stencil hit a node/pole */
  BQ_ERR_DEGENERATE = 7,        /* vanishing xy projection: azimuth undefined */
  BQ_ERR_ILL_CONDITIONED = 8,
  BQ_ERR_REGIME = 9,            /* closed form not valid for this state */
  BQ_ERR_RESOLUTION = 10,       /* histogram too coarse for the request */
  BQ_ERR_CLIPPED_MASS = 11,     /* too much probability outside the histogram */
  BQ_ERR_STEP_UNDERFLOW = 12,   /* trajectory approached a node/pole */
  BQ_ERR_IO = 13,
  BQ_ERR_INTERNAL = 14
} bq_status;

/* Human-readable name of a status code (static storage). */
BQ_API const char* bq_status_name(bq_status status);

/* Message of the last error raised on the calling thread (thread-local). */
BQ_API const char* bq_last_error(void);

/* Library version, "major.minor.patch" (static storage). */
BQ_API const char* bq_version(void);

/* ------------------------------------------------------------------ */
/* Point evaluation                                                    */
/* ------------------------------------------------------------------ */

/* Everything the library knows about one hidden-variable configuration.
 * lambda = {alpha1, beta1, gamma1, alpha2, beta2, gamma2} (radians). */
typedef struct bq_point_report {
  double m1[3], m2[3];        /* Bohmian angular momenta (units of hbar) */
  double e1[3], e2[3];        /* rotor principal axes */
  double len1, len2;          /* |M1|, |M2| */
  double mxy1, mxy2;          /* xy-plane projections */
  double cos_big_phi;         /* angle between M1 and M2 */
  double cos_az, sin_az;      /* relative azimuth phi2 - phi1 */
  double kinetic, qpot;       /* energy split, kinetic + qpot = 3/(4 I) */
  double density;             /* R^2(lambda) */
  double psi_re, psi_im;      /* guiding wave */
  double phase_grad[6];       /* dS/d{a1,b1,g1,a2,b2,g2} */
} bq_point_report;

BQ_API bq_status bq_evaluate(double theta, double phi, const double lambda[6],
                             double inertia, bq_point_report* out);

/* Quantum polarization correlator C(a,b) for unit vectors a, b. */
BQ_API bq_status bq_qm_correlator(double theta, double phi, const double a[3],
                                  const double b[3], double* out);

/* ------------------------------------------------------------------ */
/* Runs                                                                */
/* ------------------------------------------------------------------ */

typedef struct bq_run bq_run;       /* run configuration (builder) */
typedef struct bq_result bq_result; /* finished computation */

BQ_API bq_run* bq_run_new(void);
BQ_API void bq_run_free(bq_run* run);

BQ_API bq_status bq_run_set_state(bq_run* run, double theta, double phi);
BQ_API bq_status bq_run_set_grid(bq_run* run, uint32_t n_cos_alpha1, uint32_t n_beta1,
                                 uint32_t n_cos_alpha2, uint32_t n_beta2);
BQ_API bq_status bq_run_set_mc(bq_run* run, uint64_t n_samples, uint64_t seed);
BQ_API bq_status bq_run_set_histogram(bq_run* run, double epsilon, double mu_max);
BQ_API bq_status bq_run_set_threads(bq_run* run, int threads);
BQ_API bq_status bq_run_set_inertia(bq_run* run, double inertia);

/* Estimated density of one observable with the closed-form overlay where one
 * exists.  Observables: m1x m1z m2z m_len m_len_sq mxy m1x_m2x m1z_m2z
 * norm_prod_z cos_polar. */
BQ_API bq_status bq_run_distribution(bq_run* run, const char* observable,
                                     bq_result** out);

/* Correlation tensors, extracted scalars, relative-angle statistics and the
 * quantum-mechanical references. */
BQ_API bq_status bq_run_correlation(bq_run* run, bq_result** out);

/* Entropy measures built on the M1z histogram (bin width forced to a power of
 * two so the discretized entropies are well defined). */
BQ_API bq_status bq_run_entropy(bq_run* run, const uint32_t* nu_values, size_t nu_count,
                                bq_result** out);

/* CHSH functional for the quantum and the Bohmian correlator.  Polarizers are
 * given as 4 unit vectors: a, b, a', b'. */
BQ_API bq_status bq_run_bell(bq_run* run, const double a[3], const double b[3],
                             const double a_prime[3], const double b_prime[3],
                             bq_result** out);

/* Bohmian trajectory from lambda0 with dense output every dt_output. */
BQ_API bq_status bq_run_trajectory(bq_run* run, const double lambda0[6], double t_end,
                                   double dt_output, double rel_tol, double abs_tol,
                                   bq_result** out);

BQ_API void bq_result_free(bq_result* result);

/* Serialized views of a result; pointers remain owned by the result and are
 * valid until bq_result_free.  CSV may be NULL for results with no tabular
 * payload. */
BQ_API const char* bq_result_json(bq_result* result);
BQ_API const char* bq_result_csv(bq_result* result);

/* 1 if every internal invariant monitor passed, else 0. */
BQ_API int bq_result_invariants_ok(bq_result* result);

/* ------------------------------------------------------------------ */
/* Acceptance suite                                                    */
/* ------------------------------------------------------------------ */

/* Run the full acceptance suite (or the criteria whose titles contain
 * `filter`, if non-NULL).  Prints one pass/fail line per criterion to stdout.
 * Returns the number of failed criteria, or -1 on setup errors. */
BQ_API int bq_selftest(const char* filter, int threads, int verbose);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BOHMPAIR_H */
