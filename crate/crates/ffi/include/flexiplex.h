#ifndef FLEXIPLEX_H
#define FLEXIPLEX_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FlexiplexStatus {
  FLEXIPLEX_STATUS_OK = 0,
  FLEXIPLEX_STATUS_NULL_POINTER = 1,
  FLEXIPLEX_STATUS_INVALID_ARGUMENT = 2,
  FLEXIPLEX_STATUS_VERIFICATION_FAILED = 3,
  FLEXIPLEX_STATUS_INTERNAL = 5,
} FlexiplexStatus;

/**
 * Opaque deformation family handle.
 */
typedef struct FlexiplexFamily FlexiplexFamily;

/**
 * Opaque pseudo-simplex handle.
 */
typedef struct FlexiplexSimplex FlexiplexSimplex;

/**
 * Exact signature of a symmetric matrix.
 */
typedef struct FlexiplexSignature {
  size_t positive;
  size_t negative;
  size_t zero;
} FlexiplexSignature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *flexiplex_last_error(void);

/**
 * Library version as a static string.
 */
const char *flexiplex_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void flexiplex_string_free(char *s);

/**
 * Builds the n = 4 family from comma-separated `a = (a1,a2,a3)` and
 * `b = (b2,b3,b4)`.
 *
 * # Safety
 * `a` and `b` must be valid C strings; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_family_n4(const char *a,
                                         const char *b,
                                         struct FlexiplexFamily **out);

/**
 * Builds the n = 5 family from `a = (a1,a2,a3)` and `b = (b2,b4,b5)`.
 *
 * # Safety
 * `a` and `b` must be valid C strings; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_family_n5(const char *a,
                                         const char *b,
                                         struct FlexiplexFamily **out);

/**
 * Builds the matrix family for dimension `n >= 5`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FlexiplexStatus flexiplex_family_matrix(size_t n, uint64_t seed, struct FlexiplexFamily **out);

/**
 * Releases a family. Null is ignored.
 *
 * # Safety
 * `f` must come from a `flexiplex_family_*` constructor and not be freed.
 */
void flexiplex_family_free(struct FlexiplexFamily *f);

/**
 * Order of the matrices `A`, `B`; 0 if `f` is null.
 *
 * # Safety
 * `f` must be a live handle or null.
 */
size_t flexiplex_family_order(const struct FlexiplexFamily *f);

/**
 * JSON descriptor of the family.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_family_to_json(const struct FlexiplexFamily *f, char **out);

/**
 * Exact tracked determinant at rational `t` (e.g. "3/2"), as a "p/q" string.
 *
 * # Safety
 * `f` must be a live handle, `t` a valid C string, `out` writable.
 */
enum FlexiplexStatus flexiplex_family_det_at(const struct FlexiplexFamily *f,
                                             const char *t,
                                             char **out);

/**
 * Exact signature of `tA + B/t`.
 *
 * # Safety
 * `f` must be a live handle, `t` a valid C string, `out` writable.
 */
enum FlexiplexStatus flexiplex_family_signature_at(const struct FlexiplexFamily *f,
                                                   const char *t,
                                                   struct FlexiplexSignature *out);

/**
 * Sweep CSV over a comma-separated grid, or the default grid if `grid` is
 * null.
 *
 * # Safety
 * `f` must be a live handle, `grid` a valid C string or null, `out` writable.
 */
enum FlexiplexStatus flexiplex_family_sweep_csv(const struct FlexiplexFamily *f,
                                                const char *grid,
                                                char **out);

/**
 * Parses a simplex from `{"n": .., "squared_edges": [[i, j, "p/q"], ..]}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_simplex_from_json(const char *json, struct FlexiplexSimplex **out);

/**
 * Releases a simplex. Null is ignored.
 *
 * # Safety
 * `s` must come from `flexiplex_simplex_from_json` and not be freed.
 */
void flexiplex_simplex_free(struct FlexiplexSimplex *s);

/**
 * Simplex dimension; 0 if `s` is null.
 *
 * # Safety
 * `s` must be a live handle or null.
 */
size_t flexiplex_simplex_dimension(const struct FlexiplexSimplex *s);

/**
 * Exact signed squared volume as a "p/q" string.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_simplex_signed_sq_volume(const struct FlexiplexSimplex *s,
                                                        char **out);

/**
 * Runs a named check bundle (e.g. "lemma-3.2"). `n = 0` selects the bundle
 * defaults. Writes the JSON report to `out` and returns
 * `VerificationFailed` if any check failed.
 *
 * # Safety
 * `bundle` must be a valid C string; `out` must be writable.
 */
enum FlexiplexStatus flexiplex_lemma_check(const char *bundle, size_t n, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLEXIPLEX_H */
