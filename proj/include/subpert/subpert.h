#ifndef SUBPERT_SUBPERT_H
#define SUBPERT_SUBPERT_H

/*
 * C interface to the subspace perturbation toolkit.
 *
 * Every function returns a subpert_status. On failure the output arguments
 * are left untouched and subpert_last_error() describes the problem (the
 * message is per thread and lives until the next failing call on it).
 * Handles are opaque and must be released with the matching destroy call.
 * Matrices cross the boundary in row-major order.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SUBPERT_BUILDING)
#define SUBPERT_API __declspec(dllexport)
#else
#define SUBPERT_API __declspec(dllimport)
#endif
#else
#define SUBPERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum subpert_status {
  SUBPERT_OK = 0,
  SUBPERT_E_DOMAIN = 1,     /* argument outside a function's domain */
  SUBPERT_E_VALIDATION = 2, /* precondition on the inputs failed */
  SUBPERT_E_NUMERIC = 3,    /* ill-conditioned or non-convergent */
  SUBPERT_E_AMBIGUITY = 4,  /* eigenvalue too close to a set boundary */
  SUBPERT_E_DIMENSION = 5,
  SUBPERT_E_SIZE = 6,       /* problem exceeds a size cap */
  SUBPERT_E_IO = 7,
  SUBPERT_E_INTERNAL = 8,
  SUBPERT_E_ARGUMENT = 9    /* null pointer or bad enum value */
} subpert_status;

SUBPERT_API const char* subpert_status_string(subpert_status status);
SUBPERT_API const char* subpert_last_error(void);
SUBPERT_API const char* subpert_version(void);

/* ---- matrices ---- */

typedef struct subpert_matrix subpert_matrix;

/* data may be NULL for a zero matrix. */
SUBPERT_API subpert_status subpert_matrix_create(int rows, int cols,
                                                 const double* data,
                                                 subpert_matrix** out);
/* Portable seeded generator, entries uniform in [-1, 1). */
SUBPERT_API subpert_status subpert_matrix_random_symmetric(
    int dim, uint64_t seed, subpert_matrix** out);
SUBPERT_API subpert_status subpert_matrix_read(const char* path,
                                               subpert_matrix** out);
SUBPERT_API subpert_status subpert_matrix_write(const subpert_matrix* m,
                                                const char* path);
SUBPERT_API subpert_status subpert_matrix_shape(const subpert_matrix* m,
                                                int* rows, int* cols);
SUBPERT_API subpert_status subpert_matrix_get(const subpert_matrix* m, int i,
                                              int j, double* value);
/* Copies rows*cols entries; len is the capacity of buf. */
SUBPERT_API subpert_status subpert_matrix_copy(const subpert_matrix* m,
                                               double* buf, size_t len);
SUBPERT_API subpert_status subpert_matrix_norm(const subpert_matrix* m,
                                               double* value);
SUBPERT_API void subpert_matrix_destroy(subpert_matrix* m);

/* ---- estimating functions ---- */

typedef struct subpert_constants_t {
  double c_star;
  double c_ms;
  double c_kmm;
  double c_pi4;
  double c0;
  double q;
} subpert_constants_t;

SUBPERT_API subpert_status subpert_constants(subpert_constants_t* out);
SUBPERT_API subpert_status subpert_kappa(int n, double* out);
SUBPERT_API subpert_status subpert_n_sharp(double x, int* out);
SUBPERT_API subpert_status subpert_m_star(double x, double* out);
SUBPERT_API subpert_status subpert_m_ms(double x, double* out);
SUBPERT_API subpert_status subpert_m_kmm(double x, double* out);
/* mu[0] must be 0; see the README for the admissibility condition. */
SUBPERT_API subpert_status subpert_general_f(const double* mu, size_t len,
                                             double x, double* out);

/* ---- single problems ---- */

/* Tri-state flags: 1 pass, 0 fail, -1 not applicable. */
typedef struct subpert_analysis_t {
  double d;
  double vnorm;
  double x;
  double theta;
  double bound_mstar;
  double bound_ms;
  double bound_kmm; /* NaN when x > c_kmm */
  int pass_mstar;
  int pass_ms;
  int pass_kmm;
  double sin2theta_lhs;
  double sin2theta_rhs;
  int rank_unperturbed;
  int rank_perturbed;
  int acute;
  int omega_localized;
} subpert_analysis_t;

/* sigma holds n_intervals closed intervals as (lo, hi) pairs. */
SUBPERT_API subpert_status subpert_analyze(const subpert_matrix* a,
                                           const subpert_matrix* v,
                                           const double* sigma,
                                           size_t n_intervals,
                                           subpert_analysis_t* out);
SUBPERT_API subpert_status subpert_analyze_random(int dim, double x,
                                                  uint64_t seed,
                                                  subpert_analysis_t* out);

typedef struct subpert_oscillator_t {
  subpert_analysis_t analysis;
  double complement_theta;
  int complement_equal;
  int localization_exact;
  int omega_count;
  int even_dim;
  int total_dim;
} subpert_oscillator_t;

SUBPERT_API subpert_status subpert_oscillator(int dims, int n_max,
                                              double vnorm, uint64_t seed,
                                              int parity_preserving,
                                              subpert_oscillator_t* out);

/* ---- ensembles ---- */

typedef enum subpert_subcommand {
  SUBPERT_CMD_CONSTANTS = 0,
  SUBPERT_CMD_BOUNDS,
  SUBPERT_CMD_VERIFY,
  SUBPERT_CMD_PATH,
  SUBPERT_CMD_OSCILLATOR,
  SUBPERT_CMD_STRESS
} subpert_subcommand;

typedef enum subpert_format { SUBPERT_FORMAT_CSV = 0, SUBPERT_FORMAT_JSON } subpert_format;

typedef struct subpert_config_t {
  subpert_subcommand subcommand;
  uint64_t seed;
  int trials;
  int dim_min;
  int dim_max;
  double x_min;
  double x_max;
  int grid;
  int partition;
  int osc_dims;
  int osc_nmax;
  double osc_vnorm;
  int parity_preserving;
  int timestamp; /* wall-time column; the CSV header line is chosen at write */
  int threads;
  const char* fixture_dir; /* NULL: no fixture dumps */
} subpert_config_t;

typedef struct subpert_row_t {
  long trial;
  uint64_t seed;
  int dim; /* -1 when absent; doubles are NaN and flags -1 when absent */
  double d;
  double vnorm;
  double x;
  double theta;
  double m_star;
  double m_ms;
  double m_kmm;
  double sin2_lhs;
  double sin2_rhs;
  double path_length;
  double path_bound;
  double kappa_sum;
  int kappa_steps;
  int pass_mstar;
  int pass_ms;
  int pass_kmm;
  int pass_sin2;
  int pass_path;
  int pass_kappa;
  int pass_consistency;
  double wall_ms;
  const char* error; /* "" on success; owned by the results handle */
} subpert_row_t;

typedef struct subpert_stress_t {
  long count;
  double theta_min;
  double theta_mean;
  double theta_max;
  long right_angle_events;
  long rank_changes;
} subpert_stress_t;

typedef struct subpert_results subpert_results;

SUBPERT_API void subpert_config_init(subpert_config_t* cfg);
SUBPERT_API subpert_status subpert_config_validate(const subpert_config_t* cfg);
SUBPERT_API subpert_status subpert_run(const subpert_config_t* cfg,
                                       subpert_results** out);
SUBPERT_API size_t subpert_results_count(const subpert_results* r);
SUBPERT_API subpert_status subpert_results_row(const subpert_results* r,
                                               size_t index,
                                               subpert_row_t* out);
SUBPERT_API long subpert_results_violations(const subpert_results* r);
SUBPERT_API long subpert_results_errors(const subpert_results* r);
SUBPERT_API size_t subpert_results_fixture_count(const subpert_results* r);
SUBPERT_API const char* subpert_results_fixture(const subpert_results* r,
                                                size_t index);
/* SUBPERT_E_VALIDATION unless the run was a stress run. */
SUBPERT_API subpert_status subpert_results_stress(const subpert_results* r,
                                                  subpert_stress_t* out);
/* path NULL or "-" writes to stdout. */
SUBPERT_API subpert_status subpert_results_write(const subpert_results* r,
                                                 const char* path,
                                                 subpert_format format,
                                                 int timestamp_header);
SUBPERT_API void subpert_results_destroy(subpert_results* r);

#ifdef __cplusplus
}
#endif

#endif
