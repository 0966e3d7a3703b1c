/* fractrace — fractional heat semigroup potential-theory toolkit.
 *
 * C interface of the shared library. The C++ core is not exported; all
 * functionality is reached through the opaque handles and the JSON command
 * gateway below. Every function returns an ft_status; on failure,
 * ft_last_error() describes what went wrong (thread-local).
 */
#ifndef FRACTRACE_H
#define FRACTRACE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FT_API __declspec(dllexport)
#else
#define FT_API __attribute__((visibility("default")))
#endif

typedef enum ft_status {
  FT_OK = 0,
  FT_ERR_INVALID_ARGUMENT = 1,
  FT_ERR_RUNTIME = 2,
  FT_ERR_IO = 3,
  FT_ERR_UNCONVERGED = 4,
  FT_ERR_PROPERTY_FAILED = 5
} ft_status;

typedef struct ft_kernel ft_kernel;
typedef struct ft_measure ft_measure;

/* thread-local message for the most recent failure in this thread */
FT_API const char* ft_last_error(void);

FT_API void ft_string_free(char* s);

/* ---- kernel ----------------------------------------------------------- */

/* alpha in (0, 1], dim 1..3 */
FT_API ft_status ft_kernel_create(double alpha, int dim, ft_kernel** out);
FT_API void ft_kernel_destroy(ft_kernel* k);

/* numerical evaluation at (t, x); tol <= 0 picks the default.
 * Returns FT_ERR_UNCONVERGED when the reported bound exceeds tol (the value
 * and achieved bound are still written). */
FT_API ft_status ft_kernel_eval(const ft_kernel* k, double t, const double* x, double tol,
                                double* value, double* abs_error_bound);

/* closed forms; requires alpha in {0.5, 1} */
FT_API ft_status ft_kernel_eval_closed_form(const ft_kernel* k, double t, const double* x,
                                            double* value);

/* |mass - 1| check over |x| <= spatial_cutoff (0 = automatic) */
FT_API ft_status ft_kernel_check_mass(const ft_kernel* k, double t, double spatial_cutoff,
                                      double tol, double* mass, double* defect);

/* i.i.d. samples with density K_t (alpha < 1); out must hold count*dim */
FT_API ft_status ft_kernel_sample_stable(const ft_kernel* k, double t, int count,
                                         uint64_t seed, double* out);

/* ---- discrete measures ------------------------------------------------ */

/* atoms: t[i] > 0, x in row-major count x dim, w[i] >= 0 */
FT_API ft_status ft_measure_create(const double* t, const double* x, const double* w,
                                   int count, int dim, ft_measure** out);
FT_API ft_status ft_measure_load_csv(const char* path, ft_measure** out);
FT_API void ft_measure_destroy(ft_measure* m);
FT_API ft_status ft_measure_total(const ft_measure* m, double* total);
FT_API ft_status ft_measure_size(const ft_measure* m, int* count, int* dim);

/* ---- potentials -------------------------------------------------------- */

/* variant: 'R' or 'S'; rho <= 0 means untruncated */
FT_API ft_status ft_wolff_eval(const ft_measure* m, char variant, double p, double alpha,
                               double rho, double t, const double* x, double* value);

/* variant: 'R' (spatial maximal; t ignored) or 'T' (space-time) */
FT_API ft_status ft_maximal_eval(const ft_measure* m, char variant, double alpha, double t,
                                 const double* x, double* value);

/* ---- experiment gateway ------------------------------------------------ */

/* Runs one toolkit command described by a JSON object (see README for the
 * schema; the CLI is a thin argv -> JSON translator over this call).
 * On success *summary_json receives a malloc'd JSON string (free with
 * ft_string_free). Returns FT_ERR_PROPERTY_FAILED when the command ran but
 * an asserted property did not hold. */
FT_API ft_status ft_run(const char* command_json, char** summary_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRACTRACE_H */
