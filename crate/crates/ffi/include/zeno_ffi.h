#ifndef ZENO_FFI_H
#define ZENO_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZenoStatus {
  ZENO_STATUS_OK = 0,
  ZENO_STATUS_NULL_POINTER = 1,
  ZENO_STATUS_INVALID_PARAMETER = 2,
  ZENO_STATUS_INVALID_SCHEDULE = 3,
  ZENO_STATUS_TIME_OUT_OF_RANGE = 4,
  ZENO_STATUS_FIT_FAILED = 5,
  ZENO_STATUS_GRID = 6,
  ZENO_STATUS_BUFFER_TOO_SMALL = 7,
  ZENO_STATUS_PANIC = 8,
} ZenoStatus;

typedef enum ZenoRegime {
  ZENO_REGIME_PURE_ANTI_ZENO = 0,
  ZENO_REGIME_CONVEX_ANTI_ZENO = 1,
  ZENO_REGIME_CROSSOVER_ZENO = 2,
  ZENO_REGIME_ZENO = 3,
} ZenoRegime;

/**
 * Opaque packet handle.
 */
typedef struct ZenoModel ZenoModel;

/**
 * Opaque handle to a finished shuffle run.
 */
typedef struct ZenoShuffle ZenoShuffle;

typedef struct ZenoScales {
  double tau;
  double tau_zeno;
  double tau_inflx;
  double p_spread;
  double e0;
  double mean_h;
  double delta_e;
  double momentum_ratio;
} ZenoScales;

/**
 * Summary of one shuffle run. Optional values come with a presence flag.
 */
typedef struct ZenoShuffleSummary {
  double gamma;
  double gamma_prime;
  bool has_fit;
  double gamma_prime_fit;
  double max_abs_delta;
  double l2_delta;
  bool has_crossing;
  double crossing_time;
  enum ZenoRegime regime;
  size_t samples;
} ZenoShuffleSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated description of a status code. Never free it.
 * Takes a plain int so that out-of-range codes from C stay defined.
 */
const char *zeno_status_message(int status);

/**
 * Creates a packet. On success `*out` owns a new handle.
 *
 * # Safety
 * `out` must be null or valid for a pointer write.
 */
enum ZenoStatus zeno_model_new(double hbar,
                               double mass,
                               double sigma0,
                               double x0,
                               double p0,
                               struct ZenoModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`zeno_model_new`] not yet freed.
 */
void zeno_model_free(struct ZenoModel *model);

/**
 * # Safety
 * `model` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_model_scales(const struct ZenoModel *model, struct ZenoScales *out);

/**
 * Free autocorrelation `C(t)` as real and imaginary parts.
 *
 * # Safety
 * `model` must be a live handle; `re` and `im` must be valid for writes.
 */
enum ZenoStatus zeno_correlation(const struct ZenoModel *model, double t, double *re, double *im);

/**
 * Free survival probability `|C(t)|^2`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_survival(const struct ZenoModel *model, double t, double *out);

/**
 * # Safety
 * `model` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_classify_regime(const struct ZenoModel *model,
                                     double delta_t,
                                     enum ZenoRegime *out);

/**
 * Runs a measurement schedule and keeps the result behind `*out`. A failed
 * fit is not an error; check `has_fit` in the summary.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for a pointer write.
 */
enum ZenoStatus zeno_shuffle_new(const struct ZenoModel *model,
                                 double delta_t,
                                 double total_time,
                                 double sample_dt,
                                 double fit_lo,
                                 double fit_hi,
                                 struct ZenoShuffle **out);

/**
 * # Safety
 * `shuffle` must be null or a handle from [`zeno_shuffle_new`] not yet freed.
 */
void zeno_shuffle_free(struct ZenoShuffle *shuffle);

/**
 * # Safety
 * `shuffle` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_shuffle_summary(const struct ZenoShuffle *shuffle,
                                     struct ZenoShuffleSummary *out);

/**
 * Copies sample times and the perturbed `|C|` into caller buffers of
 * capacity `cap`. `*written` always receives the sample count, so a first
 * call with `cap = 0` sizes the buffers.
 *
 * # Safety
 * `shuffle` must be a live handle, `written` valid for a write, and `times`
 * and `modulus` valid for `cap` writes each (they may be null when `cap` is 0).
 */
enum ZenoStatus zeno_shuffle_trace(const struct ZenoShuffle *shuffle,
                                   double *times,
                                   double *modulus,
                                   size_t cap,
                                   size_t *written);

/**
 * Perturbed survival probability at `t` under the handle's schedule.
 *
 * # Safety
 * `shuffle` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_shuffle_survival(const struct ZenoShuffle *shuffle, double t, double *out);

/**
 * Same quantity built from the steady per-interval attenuation factors.
 *
 * # Safety
 * `shuffle` must be a live handle; `out` must be valid for a write.
 */
enum ZenoStatus zeno_shuffle_steady_survival(const struct ZenoShuffle *shuffle,
                                             double t,
                                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZENO_FFI_H */
