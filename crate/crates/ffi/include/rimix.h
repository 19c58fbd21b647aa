#ifndef RIMIX_H
#define RIMIX_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RimixStatus {
  RIMIX_STATUS_OK = 0,
  RIMIX_STATUS_NULL_POINTER = 1,
  RIMIX_STATUS_INVALID_UTF8 = 2,
  RIMIX_STATUS_INVALID_STEP = 3,
  RIMIX_STATUS_INVALID_GRID = 4,
  RIMIX_STATUS_INVALID_SPACE = 5,
  RIMIX_STATUS_DOMAIN = 6,
  RIMIX_STATUS_UNSUPPORTED = 7,
  RIMIX_STATUS_PRECONDITION = 8,
  RIMIX_STATUS_PARSE = 9,
  RIMIX_STATUS_INTERNAL = 10,
  RIMIX_STATUS_PANIC = 11,
} RimixStatus;

/**
 * Grid function on the unit cube.
 */
typedef struct RimixGrid RimixGrid;

/**
 * Rearrangement-invariant space.
 */
typedef struct RimixSpace RimixSpace;

/**
 * Step function on `(0, length)`.
 */
typedef struct RimixStep RimixStep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rimix_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rimix_version(void);

/**
 * Step function with pieces `(ends[i-1], ends[i])` of value `values[i]`.
 *
 * # Safety
 * `ends` and `values` must point to `len` readable doubles; `out_step` must be writable.
 */
enum RimixStatus rimix_step_new(double length,
                                const double *ends,
                                const double *values,
                                size_t len,
                                struct RimixStep **out_step);

/**
 * Step function from its JSON file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_step` must be writable.
 */
enum RimixStatus rimix_step_from_json(const char *json, struct RimixStep **out_step);

/**
 * # Safety
 * `step` must come from a `rimix_step_*` constructor and not be used afterwards.
 */
void rimix_step_free(struct RimixStep *step);

/**
 * Grid with `cells^n` values in row-major order.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out_grid` must be writable.
 */
enum RimixStatus rimix_grid_new(size_t n,
                                size_t cells,
                                const double *values,
                                size_t len,
                                struct RimixGrid **out_grid);

/**
 * Grid from its JSON file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_grid` must be writable.
 */
enum RimixStatus rimix_grid_from_json(const char *json, struct RimixGrid **out_grid);

/**
 * # Safety
 * `grid` must come from a `rimix_grid_*` constructor and not be used afterwards.
 */
void rimix_grid_free(struct RimixGrid *grid);

/**
 * Parses a space such as `"L1"`, `"Lp:2"`, `"Lpq:2,1"` or `"Lambda:sqrt"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out_space` must be writable.
 */
enum RimixStatus rimix_space_parse(const char *spec, struct RimixSpace **out_space);

/**
 * # Safety
 * `space` must come from [`rimix_space_parse`] and not be used afterwards.
 */
void rimix_space_free(struct RimixSpace *space);

/**
 * `‖f‖_X`.
 *
 * # Safety
 * Handles must be live; `out_value` must be writable.
 */
enum RimixStatus rimix_ri_norm(const struct RimixSpace *space,
                               const struct RimixStep *step,
                               double *out_value);

/**
 * `‖f‖_{R(X,Y)}`, summed over all axes when `axis < 0`.
 *
 * # Safety
 * Handles must be live; `out_value` must be writable.
 */
enum RimixStatus rimix_mixed_norm(const struct RimixGrid *grid,
                                  const struct RimixSpace *x,
                                  const struct RimixSpace *y,
                                  int32_t axis,
                                  double *out_value);

/**
 * `K(f, t; X, L^∞)` for a step function.
 *
 * # Safety
 * Handles must be live; `out_value` must be writable.
 */
enum RimixStatus rimix_k_step(const struct RimixStep *step,
                              const struct RimixSpace *x,
                              double t,
                              double *out_value);

/**
 * `K(f, t; R(X,L^∞), L^∞)` for a grid.
 *
 * # Safety
 * Handles must be live; `out_value` must be writable.
 */
enum RimixStatus rimix_k_grid(const struct RimixGrid *grid,
                              const struct RimixSpace *x,
                              double t,
                              double *out_value);

/**
 * Norm of `f` in the optimal r.i. range of `R(X,L^∞)` in dimension `n`.
 *
 * # Safety
 * Handles must be live; `out_value` must be writable.
 */
enum RimixStatus rimix_optimal_range(const struct RimixSpace *x,
                                     size_t n,
                                     const struct RimixStep *step,
                                     double *out_value);

/**
 * `‖f‖_{L^{n',1}}`, `‖f‖_{R(L1,L^∞)}` and their ratio, written to `out3[0..3]`.
 *
 * # Safety
 * `grid` must be live; `out3` must point to 3 writable doubles.
 */
enum RimixStatus rimix_fournier(const struct RimixGrid *grid, double *out3);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RIMIX_H */
