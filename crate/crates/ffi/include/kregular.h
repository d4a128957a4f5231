#ifndef KREGULAR_H
#define KREGULAR_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every `kr_*` call.
 */
typedef enum {
  KR_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  KR_STATUS_NULL_POINTER = 1,
  /**
   * An argument was out of range, e.g. `k == 0` or a wrong tuple length.
   */
  KR_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Partition text could not be parsed, or a string was not UTF-8.
   */
  KR_STATUS_PARSE = 3,
  /**
   * The partition has a part repeated more than `k` times.
   */
  KR_STATUS_NOT_REGULAR = 4,
  /**
   * Base and lambda do not form a valid reduced pair.
   */
  KR_STATUS_INVALID_PAIR = 5,
  /**
   * An internal panic was caught.
   */
  KR_STATUS_PANIC = 6,
} KrStatus;

/**
 * Opaque polynomial in `q` with integer coefficients.
 */
typedef struct KrPoly KrPoly;

/**
 * Opaque reduced pair: base multiplicity word plus auxiliary partition.
 */
typedef struct KrReducedPair KrReducedPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `kr_*` call on the same thread.
 */
const char *kr_last_error_message(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kr_string_free(char *s);

/**
 * Two-index polynomial b(m, n).
 *
 * # Safety
 * `out` must be valid for writing a handle.
 */
KrStatus kr_b_poly(size_t m, size_t n, KrPoly **out);

/**
 * Polynomial a(m, n).
 *
 * # Safety
 * `out` must be valid for writing a handle.
 */
KrStatus kr_a_poly(size_t m, size_t n, KrPoly **out);

/**
 * General polynomial b(n_k, ..., n_1) for `tuple` of length `k`.
 *
 * # Safety
 * `tuple` must point to `len` readable values; `out` must be writable.
 */
KrStatus kr_b_poly_k(size_t k, const size_t *tuple, size_t len, KrPoly **out);

/**
 * Degree of `p`, or -1 for the zero polynomial.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
KrStatus kr_poly_degree(const KrPoly *p, int64_t *out);

/**
 * Value of `p` at q = 1 as a decimal string.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
KrStatus kr_poly_eval_one(const KrPoly *p, char **out);

/**
 * JSON form `{"var":"q","coeffs":["1","2",...]}`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
KrStatus kr_poly_to_json(const KrPoly *p, char **out);

/**
 * Human-readable form such as `1 + 2q - q^3`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
KrStatus kr_poly_to_string(const KrPoly *p, char **out);

/**
 * Release a polynomial. Null is ignored.
 *
 * # Safety
 * `p` must come from this library and not have been freed.
 */
void kr_poly_free(KrPoly *p);

/**
 * Reduce a k-regular partition given as space-separated, weakly increasing
 * parts, e.g. `"3 6 10 10"`.
 *
 * # Safety
 * `partition` must be a NUL-terminated string; `out` must be writable.
 */
KrStatus kr_reduce(size_t k, const char *partition, KrReducedPair **out);

/**
 * Reduced pair from base partition text (sizes 1..s) and lambda text.
 *
 * # Safety
 * `base` and `lambda` must be NUL-terminated strings; `out` must be writable.
 */
KrStatus kr_pair_new(size_t k, const char *base, const char *lambda, KrReducedPair **out);

/**
 * Base partition text of a pair.
 *
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
KrStatus kr_pair_base(const KrReducedPair *pair, char **out);

/**
 * Lambda text of a pair.
 *
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
KrStatus kr_pair_lambda(const KrReducedPair *pair, char **out);

/**
 * Inverse of [`kr_reduce`]: the partition text.
 *
 * # Safety
 * `pair` must be a live handle; `out` must be writable.
 */
KrStatus kr_build(const KrReducedPair *pair, char **out);

/**
 * Release a pair. Null is ignored.
 *
 * # Safety
 * `pair` must come from this library and not have been freed.
 */
void kr_pair_free(KrReducedPair *pair);

/**
 * Compare the product side with the recurrence side through x^xmax q^qmax.
 * Writes the report as JSON and sets `verified`.
 *
 * # Safety
 * `verified` and `out` must be writable.
 */
KrStatus kr_verify_identity_json(size_t k, size_t xmax, size_t qmax, bool *verified, char **out);

/**
 * Unimodality scan of b over tuples of length k with index sum at most
 * `sum_bound`. Writes the report as JSON and the counterexample count.
 *
 * # Safety
 * `counterexamples` and `out` must be writable.
 */
KrStatus kr_scan_unimodality_json(size_t k, size_t sum_bound, size_t *counterexamples, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KREGULAR_H */
