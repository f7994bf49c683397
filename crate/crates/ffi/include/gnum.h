#ifndef GNUM_H
#define GNUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GnumStatus {
  GNUM_STATUS_OK = 0,
  GNUM_STATUS_NULL_POINTER = 1,
  GNUM_STATUS_INVALID_UTF8 = 2,
  GNUM_STATUS_INVALID_INPUT = 3,
  GNUM_STATUS_DOMAIN = 4,
  GNUM_STATUS_BUDGET_EXCEEDED = 5,
  GNUM_STATUS_OUTSIDE_HALF_PLANE = 6,
  GNUM_STATUS_PANIC = 7,
} GnumStatus;

/**
 * Opaque prime system.
 */
typedef struct GnumSystem GnumSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gnum_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gnum_version(void);

/**
 * Loads a system from `builtin:NAME[:k=v,...]`, `primes:2,3,5` or a JSON file path.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GnumStatus gnum_system_from_source(const char *source, struct GnumSystem **out);

/**
 * Builds a discrete system from `len` nondecreasing primes.
 *
 * # Safety
 * `primes` must point to `len` doubles and `out` must be valid.
 */
enum GnumStatus gnum_system_from_primes(const double *primes,
                                        uintptr_t len,
                                        struct GnumSystem **out);

/**
 * # Safety
 * `sys` must come from a `gnum_system_*` constructor and not be used afterwards. NULL is ignored.
 */
void gnum_system_free(struct GnumSystem *sys);

/**
 * `N(x)`; `h` and `u_max` set the grid for continuous systems.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid.
 */
enum GnumStatus gnum_count(const struct GnumSystem *sys,
                           double x,
                           double h,
                           double u_max,
                           double *out);

/**
 * `ζ(σ + it)` with the default method for the system.
 *
 * # Safety
 * `sys` must be a live handle; `re` and `im` must be valid.
 */
enum GnumStatus gnum_zeta(const struct GnumSystem *sys,
                          double sigma,
                          double t,
                          double *re,
                          double *im);

/**
 * `m(x) = Σ μ(n)/n`.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid.
 */
enum GnumStatus gnum_m_value(const struct GnumSystem *sys,
                             double x,
                             double h,
                             double u_max,
                             double *out);

/**
 * `ℓ(x) = Σ λ(n)/n`.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid.
 */
enum GnumStatus gnum_ell_value(const struct GnumSystem *sys,
                               double x,
                               double h,
                               double u_max,
                               double *out);

/**
 * Density constant `a = exp J(1)` with the integral cut at `u_max` and
 * continued as `Π₀` beyond.
 *
 * # Safety
 * `sys` must be a live handle and `out` valid.
 */
enum GnumStatus gnum_density_constant(const struct GnumSystem *sys, double u_max, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GNUM_H */
