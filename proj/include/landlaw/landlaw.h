/* C interface to the landlaw library.
 *
 * Every function returns an ll_status; on failure a description is available
 * from ll_last_error() on the calling thread until the next call. Objects are
 * opaque handles released with the matching *_free function (NULL is
 * accepted). Output arrays are caller-allocated; lengths are given in
 * elements. Paths equal to "-" mean standard output for writers.
 */
#ifndef LANDLAW_H
#define LANDLAW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LL_API __declspec(dllexport)
#else
#define LL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ll_status {
  LL_OK = 0,
  LL_ERR_INVALID_ARGUMENT = 1,
  LL_ERR_INVALID_DOMAIN = 2,
  LL_ERR_INVALID_PARTITION = 3,
  LL_ERR_DEGENERATE_CUBE = 4,
  LL_ERR_INCOMPATIBLE_PERIOD = 5,
  LL_ERR_INVALID_POTENTIAL = 6,
  LL_ERR_DIMENSION_MISMATCH = 7,
  LL_ERR_PARITY = 8,
  LL_ERR_SINGULAR_OPERATOR = 9,
  LL_ERR_ITERATION_LIMIT = 10,
  LL_ERR_SHIFT_DEGENERACY = 11,
  LL_ERR_SCALE = 12,
  LL_ERR_FIT = 13,
  LL_ERR_WINDOW = 14,
  LL_ERR_PRECONDITION = 15,
  LL_ERR_IO = 16,
  LL_ERR_REALIZATION = 17,
  LL_ERR_INTERNAL = 99
} ll_status;

LL_API const char* ll_version(void);
LL_API const char* ll_last_error(void);
LL_API const char* ll_status_name(ll_status status);

typedef struct ll_potential ll_potential;
typedef struct ll_hamiltonian ll_hamiltonian;
typedef struct ll_landscape ll_landscape;
typedef struct ll_report ll_report;
typedef struct ll_curve ll_curve;
typedef struct ll_ensemble ll_ensemble;
typedef struct ll_suite ll_suite;

typedef enum ll_law { LL_LAW_UNIFORM = 0, LL_LAW_BERNOULLI = 1, LL_LAW_DISCRETE = 2 } ll_law;

/* Single-site law. UNIFORM uses lo/hi, BERNOULLI uses p/height, DISCRETE uses
 * values/probs/count. */
typedef struct ll_distribution {
  ll_law law;
  double lo, hi;
  double p, height;
  const double* values;
  const double* probs;
  size_t count;
} ll_distribution;

typedef enum ll_count_method { LL_COUNT_AUTO = 0, LL_COUNT_DENSE = 1, LL_COUNT_INERTIA = 2 } ll_count_method;
typedef enum ll_solver { LL_SOLVER_AUTO = 0, LL_SOLVER_DIRECT = 1, LL_SOLVER_CG = 2 } ll_solver;

typedef struct ll_solve_options {
  ll_solver solver;
  double tolerance;
  size_t direct_limit;
  int allow_constant;
} ll_solve_options;

typedef struct ll_count_options {
  ll_count_method method;
  size_t dense_limit;
} ll_count_options;

LL_API void ll_solve_options_default(ll_solve_options* o);
LL_API void ll_count_options_default(ll_count_options* o);

/* Potentials. `bound` is the ensemble V_max; pass NaN for none. */
LL_API ll_status ll_potential_create(int d, int k, const double* values, size_t n, double bound, ll_potential** out);
LL_API ll_status ll_potential_periodic(int d, int k, const int* cell_dims, const double* cell, size_t n,
                                       ll_potential** out);
LL_API ll_status ll_potential_sample(int d, int k, const ll_distribution* dist, uint64_t seed, uint64_t realization,
                                     ll_potential** out);
LL_API ll_status ll_potential_load(const char* path, ll_potential** out);
LL_API ll_status ll_potential_save(const ll_potential* v, const char* path);
LL_API ll_status ll_potential_info(const ll_potential* v, int* d, int* k, double* vmax, double* reference_max);
LL_API ll_status ll_potential_values(const ll_potential* v, double* out, size_t n);
LL_API void ll_potential_free(ll_potential* v);

LL_API ll_status ll_distribution_cdf(const ll_distribution* dist, double delta, double* out);

/* Hamiltonians and eigenvalue counting. */
LL_API ll_status ll_hamiltonian_create(const ll_potential* v, ll_hamiltonian** out);
LL_API ll_status ll_hamiltonian_dual(const ll_hamiltonian* h, ll_hamiltonian** out);
LL_API ll_status ll_hamiltonian_info(const ll_hamiltonian* h, int* d, int* k, double* spectral_top);
LL_API ll_status ll_hamiltonian_apply(const ll_hamiltonian* h, const double* phi, double* out, size_t n);
LL_API ll_status ll_hamiltonian_spectrum(const ll_hamiltonian* h, double* out, size_t n);
LL_API ll_status ll_count(const ll_hamiltonian* h, double mu, int strict, const ll_count_options* o, size_t* out);
LL_API ll_status ll_ids_curve(const ll_hamiltonian* h, const double* grid, size_t n, const ll_count_options* o,
                              double* out);
LL_API ll_status ll_dual_identity(const ll_hamiltonian* h, const double* grid, size_t n, const ll_count_options* o,
                                  int64_t* max_deviation);
LL_API void ll_hamiltonian_free(ll_hamiltonian* h);

/* Landscapes and box counting. */
LL_API ll_status ll_landscape_solve(const ll_hamiltonian* h, const ll_solve_options* o, ll_landscape** out);
LL_API ll_status ll_landscape_load(const char* path, ll_landscape** out);
LL_API ll_status ll_landscape_save(const ll_landscape* l, const char* path);
LL_API ll_status ll_landscape_info(const ll_landscape* l, int* d, int* k, double* residual, ll_solver* solver,
                                   size_t* iterations);
LL_API ll_status ll_landscape_values(const ll_landscape* l, double* out, size_t n);
LL_API ll_status ll_uncertainty_residual(const ll_hamiltonian* h, const ll_landscape* l, const double* f, size_t n,
                                         double* out);
LL_API ll_status ll_scaling_constant(const ll_landscape* l, int ell, double* out);
LL_API ll_status ll_box_counting(const ll_landscape* l, double mu, double* out);
LL_API ll_status ll_nu_curve(const ll_landscape* l, const double* grid, size_t n, double* out);
/* 1 - N_u~(top - mu) for the landscape of the dual operator; NaN below the box-counting domain. */
LL_API ll_status ll_dual_nu_curve(const ll_landscape* dual, double top, const double* grid, size_t n, double* out);
LL_API void ll_landscape_free(ll_landscape* l);

LL_API ll_status ll_min_box_mu(int k, double* out);
/* Writes up to `capacity` grid points; *n receives the count. */
LL_API ll_status ll_default_grid(int d, int k, double vmax, size_t points, double* out, size_t capacity, size_t* n);

/* Curves on disk: CSV with header mu,value,kind. */
LL_API ll_status ll_curve_write(const char* path, const double* grid, const double* values, size_t n,
                                const char* kind);
LL_API ll_status ll_curve_read(const char* path, ll_curve** out);
LL_API ll_status ll_curve_size(const ll_curve* c, size_t* n);
LL_API ll_status ll_curve_data(const ll_curve* c, double* grid, double* values, size_t n);
LL_API const char* ll_curve_kind(const ll_curve* c);
LL_API void ll_curve_free(ll_curve* c);

/* Landscape-law checks. */
LL_API ll_status ll_upper_bound_check(const double* grid, const double* n_values, size_t n, const ll_landscape* l,
                                      ll_report** out);
LL_API ll_status ll_lower_bound_check(const double* grid, const double* n_values, size_t n, const ll_landscape* l,
                                      double alpha, double c0, double big_c0, double c1, ll_report** out);
LL_API ll_status ll_fit_scaling(const double* grid, const double* n_values, size_t n, const ll_landscape* l,
                                double* c1, double* c2, double* sup_distance);
/* Fit against the average box-counting function of `count` landscapes. */
LL_API ll_status ll_fit_scaling_mean(const double* grid, const double* n_values, size_t n,
                                     const ll_landscape* const* landscapes, size_t count, double* c1, double* c2,
                                     double* sup_distance);
LL_API ll_status ll_report_attach_fit(ll_report* r, double c1, double c2, double sup_distance);
LL_API ll_status ll_report_summary(const ll_report* r, size_t* points, size_t* violations, size_t* truncated,
                                   double* min_margin);
LL_API ll_status ll_report_violation(const ll_report* r, size_t i, double* mu, double* lhs, double* rhs);
LL_API ll_status ll_report_write(const ll_report* r, const char* path);
LL_API void ll_report_free(ll_report* r);

/* Ensembles. */
typedef struct ll_ensemble_config {
  int d, k;
  ll_distribution dist;
  size_t realizations;
  uint64_t seed;
  const double* grid;
  size_t grid_size;
  int want_n, want_nu, want_dual, want_upper;
  size_t threads;
  ll_count_options count;
  ll_solve_options solve;
} ll_ensemble_config;

/* LL_MEAN_NU_UPPER is the mean of N_u(4d mu), the right side of the upper law. */
typedef enum ll_mean { LL_MEAN_N = 0, LL_MEAN_NU = 1, LL_MEAN_NU_DUAL = 2, LL_MEAN_NU_UPPER = 3 } ll_mean;

LL_API ll_status ll_ensemble_run(const ll_ensemble_config* cfg, ll_ensemble** out);
LL_API ll_status ll_ensemble_curve(const ll_ensemble* e, ll_mean which, double* mean, double* se, size_t n);
/* Number of grid points where mean N exceeds mean N_u(4d mu). */
LL_API ll_status ll_ensemble_upper_violations(const ll_ensemble* e, size_t* count);
LL_API ll_status ll_ensemble_write(const ll_ensemble* e, const char* path);
/* Window (max(kstar, 1)/K^2, min(mu0, grid max)) over the mean N curve, then
 * the log(-log) slope fitted on it. */
LL_API ll_status ll_ensemble_tail(const ll_ensemble* e, int k, double mu0, double kstar, double* lo, double* hi,
                                  size_t* used, size_t* excluded, double* slope);
LL_API void ll_ensemble_free(ll_ensemble* e);

/* Oracle suite. */
LL_API ll_status ll_suite_run(uint64_t seed, size_t trials, size_t chernoff_trials, ll_suite** out);
LL_API ll_status ll_suite_rows(const ll_suite* s, size_t* n);
LL_API ll_status ll_suite_row(const ll_suite* s, size_t i, const char** name, int* hard, size_t* trials,
                              size_t* passed, double* value);
LL_API ll_status ll_suite_hard_pass(const ll_suite* s, int* pass);
LL_API ll_status ll_suite_write(const ll_suite* s, const char* path, int csv);
LL_API void ll_suite_free(ll_suite* s);

#ifdef __cplusplus
}
#endif

#endif
