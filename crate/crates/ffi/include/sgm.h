#ifndef SGM_H
#define SGM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SgmScheme {
  SGM_SCHEME_ETDRK2 = 0,
  SGM_SCHEME_IMEX_EULER = 1,
} SgmScheme;

/**
 * Result codes.
 */
typedef enum SgmStatus {
  SGM_STATUS_OK = 0,
  SGM_STATUS_NULL_POINTER = 1,
  SGM_STATUS_INVALID_ARGUMENT = 2,
  SGM_STATUS_OUT_OF_RANGE = 3,
  SGM_STATUS_BLOW_UP = 4,
  SGM_STATUS_NON_FINITE = 5,
  SGM_STATUS_PARSE = 6,
  SGM_STATUS_IO = 7,
  SGM_STATUS_PANIC = 8,
} SgmStatus;

/**
 * Space-time field sampled on the periodic grid.
 */
typedef struct SgmField SgmField;

typedef struct SgmSolverParams {
  /**
   * Even, at least 8; the period is 2π.
   */
  size_t n_points;
  double t_start;
  double t_end;
  double dt;
  enum SgmScheme scheme;
  bool dealias;
  /**
   * Store every `stride`-th step.
   */
  size_t stride;
} SgmSolverParams;

/**
 * Scale-invariant quantities on one cylinder.
 */
typedef struct SgmQuantities {
  double g;
  double u;
  double o;
  double l;
  double f;
  /**
   * The cylinder reached outside the stored time range.
   */
  bool clipped;
} SgmQuantities;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *sgm_version(void);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *sgm_last_error(void);

/**
 * Builds a field from `n_times × n_points` samples, stored time-major, at
 * times `t_start + n·dt`.
 *
 * # Safety
 * `samples` must point to `n_times * n_points` doubles; `out` must be writable.
 */
enum SgmStatus sgm_field_new(size_t n_points,
                             size_t n_times,
                             double t_start,
                             double dt,
                             const double *samples,
                             struct SgmField **out);

/**
 * Reads a field file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SgmStatus sgm_field_read(const char *path, struct SgmField **out);

/**
 * Writes a field file.
 *
 * # Safety
 * `field` must be a live handle; `path` a NUL-terminated string.
 */
enum SgmStatus sgm_field_write(const struct SgmField *field, const char *path);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `field` must be null or a handle not yet freed.
 */
void sgm_field_free(struct SgmField *field);

/**
 * # Safety
 * `field` must be a live handle; outputs must be writable.
 */
enum SgmStatus sgm_field_shape(const struct SgmField *field,
                               size_t *n_points,
                               size_t *n_times,
                               double *t_start,
                               double *dt);

/**
 * Copies all samples, time-major, into `out` of length `len`.
 *
 * # Safety
 * `field` must be a live handle; `out` must hold `len` doubles.
 */
enum SgmStatus sgm_field_samples(const struct SgmField *field, double *out, size_t len);

/**
 * Integrates from `u0` (length `params.n_points`) with an optional sampled
 * forcing (null for none).
 *
 * # Safety
 * Pointers must be valid as described; `out` must be writable.
 */
enum SgmStatus sgm_simulate(const struct SgmSolverParams *params,
                            const double *u0,
                            const struct SgmField *forcing,
                            struct SgmField **out);

/**
 * Quantities on the cylinder of radius `r` centered at `(x0, t0)`.
 *
 * # Safety
 * `u` must be a live handle, `f` null or a live handle, `out` writable.
 */
enum SgmStatus sgm_quantities(const struct SgmField *u,
                              const struct SgmField *f,
                              double x0,
                              double t0,
                              double r,
                              double p,
                              struct SgmQuantities *out);

/**
 * Applies the sufficient regularity criteria at `n_centers` centers
 * (`centers` holds `x, t` pairs) over `radii`. `is_candidate[i]` is set to 1
 * when no criterion certified center `i`. The other thresholds default from
 * `delta0` with `p = 3`, `λ = θ = 1/32`.
 *
 * # Safety
 * Arrays must hold the stated number of values; `is_candidate` must hold
 * `n_centers` bytes.
 */
enum SgmStatus sgm_singular_candidates(const struct SgmField *u,
                                       const struct SgmField *f,
                                       const double *centers,
                                       size_t n_centers,
                                       const double *radii,
                                       size_t n_radii,
                                       double delta0,
                                       uint8_t *is_candidate);

/**
 * Greedy biparabolic cover of `n` points (`x, t` pairs) by cylinders of
 * radius below `delta_cap`; returns `Σ r^exponent` and the cylinder count.
 *
 * # Safety
 * `points` must hold `2n` doubles; outputs must be writable.
 */
enum SgmStatus sgm_cover_sum(const double *points,
                             size_t n,
                             double delta_cap,
                             double exponent,
                             double *sum,
                             size_t *n_cylinders);

/**
 * Box-counting dimension in the biparabolic metric; `degenerate` is set
 * when every radius needed the same count.
 *
 * # Safety
 * `points` must hold `2n` doubles and `radii` `n_radii`; outputs writable.
 */
enum SgmStatus sgm_box_dimension(const double *points,
                                 size_t n,
                                 const double *radii,
                                 size_t n_radii,
                                 double *dimension,
                                 bool *degenerate);

/**
 * Hölder exponent from the mean oscillation at `(x0, t0)`; NaN when the
 * oscillation vanishes at every radius.
 *
 * # Safety
 * `u` must be a live handle, `radii` hold `n_radii` doubles, `alpha` writable.
 */
enum SgmStatus sgm_holder_exponent(const struct SgmField *u,
                                   double x0,
                                   double t0,
                                   const double *radii,
                                   size_t n_radii,
                                   double *alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGM_H */
