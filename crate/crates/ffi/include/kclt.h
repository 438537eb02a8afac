#ifndef KCLT_H
#define KCLT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum KcltStatus {
  KCLT_STATUS_OK = 0,
  KCLT_STATUS_NULL_POINTER = 1,
  KCLT_STATUS_INVALID_ARGUMENT = 2,
  KCLT_STATUS_UNSUPPORTED_DIMENSION = 3,
  KCLT_STATUS_INADMISSIBLE = 4,
  KCLT_STATUS_BUDGET_EXCEEDED = 5,
  KCLT_STATUS_FACTORIZATION = 6,
  KCLT_STATUS_GRID_MISMATCH = 7,
  KCLT_STATUS_IO = 8,
  KCLT_STATUS_PARSE = 9,
  KCLT_STATUS_BUFFER_TOO_SMALL = 10,
  KCLT_STATUS_PANIC = 11,
} KcltStatus;

/**
 * Edge corrections for the K-estimator.
 */
typedef enum KcltCorrection {
  KCLT_CORRECTION_NONE = 0,
  KCLT_CORRECTION_TRANSLATION = 1,
  KCLT_CORRECTION_RIGID_MOTION = 2,
  KCLT_CORRECTION_BORDER = 3,
  KCLT_CORRECTION_ISOTROPIC = 4,
} KcltCorrection;

/**
 * Opaque limit model.
 */
typedef struct KcltLimit KcltLimit;

/**
 * Opaque point pattern.
 */
typedef struct KcltPattern KcltPattern;

/**
 * Result of [`kclt_gof_test`].
 */
typedef struct KcltGofResult {
  double statistic;
  double quantile;
  double alpha;
  double r_max;
  /**
   * 1 if the null is rejected, else 0.
   */
  int32_t reject;
} KcltGofResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next `kclt_*` call on the same thread.
 */
const char *kclt_last_error(void);

/**
 * Builds a pattern from `n_points * dim` coordinates in the centred cube of
 * the given volume.
 *
 * # Safety
 * `coords` must point to `n_points * dim` doubles (or be null when
 * `n_points` is 0) and `out` must be a valid pointer.
 */
enum KcltStatus kclt_pattern_new(size_t dim,
                                 double volume,
                                 const double *coords,
                                 size_t n_points,
                                 struct KcltPattern **out);

/**
 * # Safety
 * `pattern` must come from this library and not be used afterwards.
 */
void kclt_pattern_free(struct KcltPattern *pattern);

/**
 * Number of points; 0 for a null handle.
 *
 * # Safety
 * `pattern` must be null or a live handle.
 */
size_t kclt_pattern_len(const struct KcltPattern *pattern);

/**
 * Dimension; 0 for a null handle.
 *
 * # Safety
 * `pattern` must be null or a live handle.
 */
size_t kclt_pattern_dim(const struct KcltPattern *pattern);

/**
 * Row-major coordinates, `len * dim` doubles owned by the handle.
 *
 * # Safety
 * `pattern` must be null or a live handle.
 */
const double *kclt_pattern_coords(const struct KcltPattern *pattern);

/**
 * Homogeneous Poisson pattern.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KcltStatus kclt_sample_poisson(size_t dim,
                                    double volume,
                                    double rho,
                                    uint64_t seed,
                                    uint64_t stream,
                                    struct KcltPattern **out);

/**
 * Planar log-Gaussian Cox pattern of unit intensity with exponential
 * covariance `sigma2 * exp(-h / scale)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KcltStatus kclt_sample_lgcp(double volume,
                                 double sigma2,
                                 double scale,
                                 uint64_t seed,
                                 uint64_t stream,
                                 struct KcltPattern **out);

/**
 * Perfect sample of a planar Strauss process.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KcltStatus kclt_sample_strauss(double volume,
                                    double gamma,
                                    double radius,
                                    double tau,
                                    uint64_t seed,
                                    uint64_t stream,
                                    struct KcltPattern **out);

/**
 * Writes K on the grid `0, step, ..., r_max` into `values`. `written`
 * receives the grid length; if it exceeds `capacity` nothing is written and
 * `BufferTooSmall` is returned.
 *
 * # Safety
 * `pattern` must be a live handle, `values` must hold `capacity` doubles
 * and `written` must be a valid pointer.
 */
enum KcltStatus kclt_estimate_k(const struct KcltPattern *pattern,
                                double rho,
                                enum KcltCorrection correction,
                                double r_max,
                                double step,
                                double *values,
                                size_t capacity,
                                size_t *written);

/**
 * Closed-form planar Poisson limit on the grid `0, step, ..., r_max`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum KcltStatus kclt_limit_poisson(double r_max, double step, double rho, struct KcltLimit **out);

/**
 * Loads a limit model directory written by the command-line tool.
 *
 * # Safety
 * `dir` must be a nul-terminated UTF-8 path and `out` a valid pointer.
 */
enum KcltStatus kclt_limit_load(const char *dir, struct KcltLimit **out);

/**
 * Number of grid radii; 0 for a null handle.
 *
 * # Safety
 * `limit` must be null or a live handle.
 */
size_t kclt_limit_len(const struct KcltLimit *limit);

/**
 * # Safety
 * `limit` must come from this library and not be used afterwards.
 */
void kclt_limit_free(struct KcltLimit *limit);

/**
 * Sup-type goodness-of-fit test of `pattern` against `limit` on `[0, r_max]`
 * with the quantile estimated from `paths` Gaussian paths.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum KcltStatus kclt_gof_test(const struct KcltPattern *pattern,
                              const struct KcltLimit *limit,
                              double alpha,
                              double r_max,
                              enum KcltCorrection correction,
                              double rho,
                              size_t paths,
                              uint64_t seed,
                              uint64_t stream,
                              struct KcltGofResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCLT_H */
