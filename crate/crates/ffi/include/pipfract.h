#ifndef PIPFRACT_H
#define PIPFRACT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_INVALID_ARGUMENT = 1,
  PF_STATUS_NULL_POINTER = 2,
  PF_STATUS_BUFFER_SIZE = 3,
  PF_STATUS_BEYOND_UNIVERSE = 4,
  PF_STATUS_OVERFLOW = 5,
  PF_STATUS_DEGENERATE = 6,
  PF_STATUS_IO = 7,
  PF_STATUS_CACHE = 8,
  PF_STATUS_PANIC = 9,
} PfStatus;

typedef enum PfFilter {
  PF_FILTER_NONE = 0,
  PF_FILTER_SIGN = 1,
  PF_FILTER_QUANT256 = 2,
} PfFilter;

typedef enum PfStyle {
  PF_STYLE_SIGN3 = 0,
  PF_STYLE_JET256 = 1,
} PfStyle;

/**
 * Opaque prime engine handle.
 */
typedef struct PfEngine PfEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pf_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *pf_version(void);

/**
 * Create an engine. `universe_bound` 0 selects the default; `threads` 0 means 1.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PfStatus pf_engine_new(uint64_t universe_bound, uint32_t threads, struct PfEngine **out);

/**
 * Release an engine. Null is ignored.
 *
 * # Safety
 * `engine` must come from [`pf_engine_new`] and not be used afterwards.
 */
void pf_engine_free(struct PfEngine *engine);

/**
 * Attach a checkpoint cache file written by `pipfract cache`.
 *
 * # Safety
 * `engine` must be a live handle and `path` a nul-terminated string.
 */
enum PfStatus pf_engine_load_cache(struct PfEngine *engine, const char *path);

/**
 * The `n`-th prime (1-based).
 *
 * # Safety
 * `engine` must be a live handle and `out` writable.
 */
enum PfStatus pf_nth_prime(const struct PfEngine *engine, uint64_t n, uint64_t *out);

/**
 * Number of primes `<= x`.
 *
 * # Safety
 * `engine` must be a live handle and `out` writable.
 */
enum PfStatus pf_prime_count(const struct PfEngine *engine, uint64_t x, uint64_t *out);

/**
 * `q_s^k(i)` for `i_lo..=i_hi` into `out`, which must hold `i_hi - i_lo + 1` values.
 *
 * # Safety
 * `engine` must be a live handle and `out` valid for `len` writes.
 */
enum PfStatus pf_pip_range(const struct PfEngine *engine,
                           uint32_t k,
                           uint64_t s,
                           uint64_t i_lo,
                           uint64_t i_hi,
                           uint64_t *out,
                           size_t len);

/**
 * Finite difference series for `i_lo..=i_hi`; `filter` is a [`PfFilter`] value.
 *
 * # Safety
 * `engine` must be a live handle and `out` valid for `len` writes.
 */
enum PfStatus pf_daleth_range(const struct PfEngine *engine,
                              uint64_t h,
                              uint32_t n,
                              uint64_t s,
                              uint32_t k,
                              uint64_t i_lo,
                              uint64_t i_hi,
                              uint32_t filter,
                              int64_t *out,
                              size_t len);

/**
 * Map `values` onto `0..=255` by their own min and max.
 *
 * # Safety
 * `values` must be valid for `len` reads and `out` for `len` writes.
 */
enum PfStatus pf_quantize256(const int64_t *values, size_t len, int64_t *out);

/**
 * Render orders `k_lo..=k_hi` over `i_lo..=i_hi` to a PPM file; `style` is
 * a [`PfStyle`] value. When
 * `meta_json` is non-null it receives the row metadata as JSON, to be
 * released with [`pf_string_free`].
 *
 * # Safety
 * `engine` must be a live handle, `path` a nul-terminated string, and
 * `meta_json` null or writable.
 */
enum PfStatus pf_render_ppm(const struct PfEngine *engine,
                            uint64_t h,
                            uint32_t n,
                            uint64_t s,
                            uint32_t k_lo,
                            uint32_t k_hi,
                            uint64_t i_lo,
                            uint64_t i_hi,
                            uint32_t style,
                            uint32_t band_width,
                            uint32_t row_height,
                            uint32_t gap,
                            const char *path,
                            char **meta_json);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIPFRACT_H */
