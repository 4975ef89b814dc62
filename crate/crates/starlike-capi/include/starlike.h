#ifndef STARLIKE_H
#define STARLIKE_H

/* Generated by cbindgen from the starlike-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this ABI.
 */
typedef enum StarlikeStatus {
  STARLIKE_STATUS_OK = 0,
  /**
   * Malformed input: null pointer, bad JSON, invalid series.
   */
  STARLIKE_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Parameters outside a statement's gate.
   */
  STARLIKE_STATUS_GATE_VIOLATION = 2,
  /**
   * Well-formed input on which the computation degenerates.
   */
  STARLIKE_STATUS_NUMERIC_ERROR = 3,
} StarlikeStatus;

/**
 * Opaque truncated power series handle.
 */
typedef struct StarlikeSeries StarlikeSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread, or null if
 * the last call succeeded. The pointer is valid until the next call
 * into this library from the same thread; do not free it.
 */
const char *starlike_last_error(void);

/**
 * Library version as a static NUL-terminated string; do not free it.
 */
const char *starlike_version(void);

/**
 * Builds a series from `len` complex coefficients laid out as
 * [re0, im0, re1, im1, ...], index 0 first.
 *
 * # Safety
 * `re_im` must point to `2 * len` readable doubles and `out` to a
 * writable pointer slot. On success `*out` owns the handle; release it
 * with [`starlike_series_free`].
 */
enum StarlikeStatus starlike_series_new(const double *re_im,
                                        size_t len,
                                        struct StarlikeSeries **out);

/**
 * Releases a handle from this library. Null is a no-op.
 *
 * # Safety
 * `series` must be a pointer previously returned by this library and
 * not freed since.
 */
void starlike_series_free(struct StarlikeSeries *series);

/**
 * Truncation order N of the series (it holds N + 1 coefficients).
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum StarlikeStatus starlike_series_order(const struct StarlikeSeries *series, size_t *out);

/**
 * Copies the coefficients out as [re0, im0, ...]; writes
 * `2 * (order + 1)` doubles and stores that count in `written`.
 *
 * # Safety
 * `series` must be a live handle; `buf` must have room for `buf_len`
 * doubles; `written` must be writable.
 */
enum StarlikeStatus starlike_series_coeffs(const struct StarlikeSeries *series,
                                           double *buf,
                                           size_t buf_len,
                                           size_t *written);

/**
 * Evaluates the series at z = z_re + i z_im by Horner's rule.
 *
 * # Safety
 * `series` must be a live handle; `out_re` and `out_im` must be
 * writable.
 */
enum StarlikeStatus starlike_series_eval(const struct StarlikeSeries *series,
                                         double z_re,
                                         double z_im,
                                         double *out_re,
                                         double *out_im);

/**
 * |lambda1| = |lambda| |mu| / |n - mu|, the transferred subordination
 * radius. Gate: Re(mu) < n, mu nonzero, 0 < |lambda| <= 1.
 *
 * # Safety
 * `out` must be writable.
 */
enum StarlikeStatus starlike_lambda1_bound(double lambda_re,
                                           double lambda_im,
                                           double mu_re,
                                           double mu_im,
                                           size_t n,
                                           double *out);

/**
 * Largest |lambda| under which the subordination criterion forces
 * starlikeness: |n - mu| / sqrt(|n - mu|^2 + |mu|^2).
 *
 * # Safety
 * `out` must be writable.
 */
enum StarlikeStatus starlike_lambda_max(double mu_re, double mu_im, size_t n, double *out);

/**
 * Piecewise starlikeness order for factor radii (l, l1). On success
 * writes alpha, the regime (0: sum branch, 1: squares branch) and a
 * seam flag; `out_regime` and `out_boundary` may be null if unwanted.
 *
 * # Safety
 * `out_alpha` must be writable; the optional outputs must be writable
 * when non-null.
 */
enum StarlikeStatus starlike_alpha_threshold(double l,
                                             double l1,
                                             double *out_alpha,
                                             int *out_regime,
                                             int *out_boundary);

/**
 * Schwarz bound (l + l1)/(1 - l1) under the gate l + 2 l1 <= 1.
 *
 * # Safety
 * `out` must be writable.
 */
enum StarlikeStatus starlike_w_bound(double l, double l1, double *out);

/**
 * Applies the integral transform to f (given as a series handle with
 * membership index n) and returns the transformed series plus the
 * coefficient identity residual.
 *
 * # Safety
 * `f` must be a live handle; `out_series` and `out_residual` must be
 * writable. On success `*out_series` owns a new handle.
 */
enum StarlikeStatus starlike_transform(const struct StarlikeSeries *f,
                                       size_t n,
                                       double mu_re,
                                       double mu_im,
                                       double c_re,
                                       double c_im,
                                       size_t order,
                                       struct StarlikeSeries **out_series,
                                       double *out_residual);

/**
 * Runs one verification described by a JSON request and returns the
 * report as a JSON string.
 *
 * Request fields: `theorem_id` (lemma21, lemma22p1, lemma22p2, thm1,
 * thm2, thm3) and `n`; complex scalars `mu`, `lambda`, `c` as
 * [re, im]; series `f`, `p`, `q`, `w` as arrays of [re, im] pairs
 * (which ones are required depends on the criterion); the two-factor
 * lemmas take either direct radii `l`, `l1` (and optional `alpha`) or
 * derive them from (mu, lambda); optional sampling controls `order`,
 * `radii`, `angles`, `tol`, `hypothesis_band`.
 *
 * # Safety
 * `request` must be a NUL-terminated UTF-8 string; `response` must be
 * writable. On success `*response` owns a NUL-terminated JSON string;
 * release it with [`starlike_string_free`].
 */
enum StarlikeStatus starlike_verify_json(const char *request, char **response);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be a string previously returned by this library and not
 * freed since.
 */
void starlike_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARLIKE_H */
