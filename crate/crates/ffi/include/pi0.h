#ifndef PI0_H
#define PI0_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  PI0_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PI0_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  PI0_STATUS_INVALID_UTF8 = 2,
  /**
   * The data describes no valid group or curve.
   */
  PI0_STATUS_INVALID_INPUT = 3,
  /**
   * The cubic is singular or numerically too close to singular.
   */
  PI0_STATUS_DEGENERATE = 4,
  /**
   * An index or buffer size is out of range, or a value does not fit.
   */
  PI0_STATUS_OUT_OF_RANGE = 5,
  /**
   * An internal consistency check failed.
   */
  PI0_STATUS_INTERNAL = 6,
  /**
   * The library panicked; the message is available from `pi0_last_error`.
   */
  PI0_STATUS_PANIC = 7,
} Pi0Status;

/**
 * Opaque component-group result.
 */
typedef struct Pi0Result Pi0Result;

/**
 * Opaque group description.
 */
typedef struct Pi0Spec Pi0Spec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null if there was none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *pi0_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pi0_version(void);

/**
 * Builds a spec from a row-major `rank × rank` involution `sigma` and
 * `n_coroots` row-major coroot vectors of length `rank`. `coroots` may be
 * null when `n_coroots` is zero.
 *
 * # Safety
 * `sigma` must point to `rank * rank` values, `coroots` to
 * `n_coroots * rank` values, and `out` must be writable.
 */
Pi0Status pi0_spec_new(size_t rank,
                       const int64_t *sigma,
                       const int64_t *coroots,
                       size_t n_coroots,
                       Pi0Spec **out);

/**
 * Parses a JSON spec document `{"rank", "sigma", "coroots", "name"?}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
Pi0Status pi0_spec_from_json(const char *json, Pi0Spec **out);

/**
 * Spec of a catalog family such as `"gl"` with size `n`; pass `n = 0` for
 * families without a size parameter.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` writable.
 */
Pi0Status pi0_catalog_spec(const char *family, size_t n, Pi0Spec **out);

/**
 * Rank of the lattice `Λ`.
 *
 * # Safety
 * `spec` must be a live handle or null; `out` must be writable.
 */
Pi0Status pi0_spec_rank(const Pi0Spec *spec, size_t *out);

/**
 * Releases a spec. Null is ignored.
 *
 * # Safety
 * `spec` must come from this library and not be used afterwards.
 */
void pi0_spec_free(Pi0Spec *spec);

/**
 * Computes `π₀ G(ℝ) ≅ (ℤ/2)^r`.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
Pi0Status pi0_compute(const Pi0Spec *spec, Pi0Result **out);

/**
 * The exponent `r` in `(ℤ/2)^r`.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
Pi0Status pi0_result_rank(const Pi0Result *result, size_t *out);

/**
 * Copies representative `index` (a vector `λ ∈ Λ₊` whose component
 * contains `Exp(iλ/2)`) into `buf`, which must hold exactly the lattice rank.
 *
 * # Safety
 * `result` must be a live handle and `buf` must point to `len` writable values.
 */
Pi0Status pi0_result_representative(const Pi0Result *result,
                                    size_t index,
                                    int64_t *buf,
                                    size_t len);

/**
 * The result as a JSON record (input fields included). Release the string
 * with `pi0_string_free`.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
Pi0Status pi0_result_to_json(const Pi0Result *result, char **out);

/**
 * Releases a result. Null is ignored.
 *
 * # Safety
 * `result` must come from this library and not be used afterwards.
 */
void pi0_result_free(Pi0Result *result);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pi0_string_free(char *s);

/**
 * Nontrivial invariant factors of `H¹(ℝ, iΛ/iQ∨)`. Writes their number to
 * `count` and the first `min(count, cap)` factors to `buf` (which may be
 * null when `cap` is zero).
 *
 * # Safety
 * `spec` must be a live handle, `buf` must hold `cap` writable values and
 * `count` must be writable.
 */
Pi0Status pi0_h1_invariant_factors(const Pi0Spec *spec, uint64_t *buf, size_t cap, size_t *count);

/**
 * Number of real components (1 or 2) of `y² = x³ + px + q`, required to
 * agree across the discriminant, the real roots and the period lattice.
 *
 * # Safety
 * `out` must be writable.
 */
Pi0Status pi0_elliptic_components(double p, double q, uint8_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PI0_H */
