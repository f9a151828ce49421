#ifndef EXPRABELO_H
#define EXPRABELO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Column selector values for [`exr_run_snapshot_copy`].
 */
typedef enum ExrQuantity {
  EXR_QUANTITY_X = 0,
  EXR_QUANTITY_V = 1,
  EXR_QUANTITY_U = 2,
  EXR_QUANTITY_P = 3,
} ExrQuantity;

typedef enum ExrStatus {
  EXR_STATUS_OK = 0,
  EXR_STATUS_NULL_POINTER = 1,
  EXR_STATUS_INVALID_ARGUMENT = 2,
  EXR_STATUS_CONFIG = 3,
  EXR_STATUS_GRID = 4,
  EXR_STATUS_RUN = 5,
  EXR_STATUS_DATA = 6,
  EXR_STATUS_OUT_OF_RANGE = 7,
  EXR_STATUS_IO = 8,
  EXR_STATUS_PANIC = 9,
} ExrStatus;

/**
 * Parsed configuration document.
 */
typedef struct ExrConfig ExrConfig;

/**
 * Completed run: snapshots and diagnostics.
 */
typedef struct ExrRun ExrRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. Valid until the
 * next failing call on the same thread.
 */
const char *exr_last_error(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *exr_version(void);

/**
 * Parse a `key = value` document.
 *
 * # Safety
 * `text` must be a NUL-terminated UTF-8 string and `out` a valid pointer.
 */
enum ExrStatus exr_config_parse(const char *text, struct ExrConfig **out);

/**
 * # Safety
 * `cfg` must come from [`exr_config_parse`] and not have been freed; null is ignored.
 */
void exr_config_free(struct ExrConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_config_n_cells(const struct ExrConfig *cfg, size_t *out);

/**
 * Run the configured simulation.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_simulate(const struct ExrConfig *cfg, struct ExrRun **out);

/**
 * # Safety
 * `run` must come from [`exr_simulate`] and not have been freed; null is ignored.
 */
void exr_run_free(struct ExrRun *run);

/**
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_run_snapshot_count(const struct ExrRun *run, size_t *out);

/**
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_run_n_cells(const struct ExrRun *run, size_t *out);

/**
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_run_snapshot_time(const struct ExrRun *run, size_t index, double *out);

/**
 * Copy one column of snapshot `index` into `buf`, which must hold `len == n_cells` doubles.
 * `which` is an [`ExrQuantity`] value.
 *
 * # Safety
 * `run` must be a live handle and `buf` valid for `len` writes.
 */
enum ExrStatus exr_run_snapshot_copy(const struct ExrRun *run,
                                     size_t index,
                                     int32_t which,
                                     double *buf,
                                     size_t len);

double exr_godunov_flux(double a, double b);

double exr_rusanov_flux(double a, double b);

/**
 * Cell values of `P = ∫_0^x v` on the grid `[x_min, x_max]` with `n` cells.
 *
 * # Safety
 * `v` must be valid for `n` reads and `p_cells` for `n` writes.
 */
enum ExrStatus exr_prefix_integral(double x_min,
                                   double x_max,
                                   const double *v,
                                   size_t n,
                                   double *p_cells);

/**
 * Terminal `L^{α+1}` balance residual relative to `N_α(0)`.
 *
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_balance_residual(const struct ExrRun *run, double alpha, double *out);

/**
 * Largest per-step relative mass-balance residual.
 *
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_mass_balance(const struct ExrRun *run, double *out);

/**
 * `max_t sup u(t) - sup u0`.
 *
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum ExrStatus exr_sup_excess(const struct ExrRun *run, double *out);

/**
 * L1 stability check at `n_times` sample times. Writes the smallest margin and
 * whether every sample satisfied the bound.
 *
 * # Safety
 * `u` and `w` must be live handles, `times` valid for `n_times` reads and the
 * outputs valid pointers.
 */
enum ExrStatus exr_stability(const struct ExrRun *u,
                             const struct ExrRun *w,
                             double radius,
                             const double *times,
                             size_t n_times,
                             double *min_margin,
                             bool *pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPRABELO_H */
