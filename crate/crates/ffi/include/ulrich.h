#ifndef ULRICH_H
#define ULRICH_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum UlrichStatus {
  ULRICH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ULRICH_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ULRICH_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed polynomial, field, variable list or JSON.
   */
  ULRICH_STATUS_INPUT = 3,
  /**
   * Handles from different rings were mixed.
   */
  ULRICH_STATUS_RING_MISMATCH = 4,
  /**
   * The ideal is not primary to the maximal ideal, or a precondition failed.
   */
  ULRICH_STATUS_PRECONDITION = 5,
  /**
   * The certificate data is inconsistent.
   */
  ULRICH_STATUS_INVALID_CERTIFICATE = 6,
  /**
   * A size or truncation limit was exceeded.
   */
  ULRICH_STATUS_LIMIT = 7,
  ULRICH_STATUS_UNSUPPORTED = 8,
  /**
   * An internal panic was caught at the boundary.
   */
  ULRICH_STATUS_INTERNAL = 9,
} UlrichStatus;

typedef struct UlrichCertificate UlrichCertificate;

typedef struct UlrichPoly UlrichPoly;

typedef struct UlrichRing UlrichRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *ulrich_last_error(void);

/**
 * Library version as a static string.
 */
const char *ulrich_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ulrich_string_free(char *s);

/**
 * Creates a ring from a field spec (`q` or `fp:<p>`) and a variable list
 * (`X,Y` or a count).
 *
 * # Safety
 * String arguments must be nul-terminated. `out` must be writable.
 */
enum UlrichStatus ulrich_ring_new(const char *field, const char *vars, struct UlrichRing **out);

/**
 * # Safety
 * `ring` must be null or a handle from [`ulrich_ring_new`].
 */
void ulrich_ring_free(struct UlrichRing *ring);

/**
 * # Safety
 * `ring` must be a live handle, `src` nul-terminated, `out` writable.
 */
enum UlrichStatus ulrich_poly_parse(const struct UlrichRing *ring,
                                    const char *src,
                                    struct UlrichPoly **out);

/**
 * Writes the canonical text form. Free it with [`ulrich_string_free`].
 *
 * # Safety
 * `poly` must be a live handle and `out` writable.
 */
enum UlrichStatus ulrich_poly_to_string(const struct UlrichPoly *poly, char **out);

/**
 * # Safety
 * `poly` must be null or a handle from this library.
 */
void ulrich_poly_free(struct UlrichPoly *poly);

/**
 * Length of `S/(gens)` for an ideal primary to the maximal ideal.
 *
 * # Safety
 * `gens` must point to `n` live handles. `out` must be writable.
 */
enum UlrichStatus ulrich_colength(const struct UlrichPoly *const *gens, size_t n, size_t *out);

/**
 * Decides whether `(gens)` is an Ulrich ideal of `S/(f)`.
 *
 * # Safety
 * `gens` must point to `n` live handles, `f` must be live, `out` writable.
 */
enum UlrichStatus ulrich_is_ulrich(const struct UlrichPoly *const *gens,
                                   size_t n,
                                   const struct UlrichPoly *f,
                                   bool *out);

/**
 * Builds a certificate `(f, a, b, x, epsilon)` with `d` entries in `a` and `x`.
 *
 * # Safety
 * `a` and `x` must point to `d` live handles each. Other handles must be live.
 */
enum UlrichStatus ulrich_certificate_new(const struct UlrichPoly *f,
                                         const struct UlrichPoly *const *a,
                                         const struct UlrichPoly *b,
                                         const struct UlrichPoly *const *x,
                                         size_t d,
                                         const struct UlrichPoly *epsilon,
                                         struct UlrichCertificate **out);

/**
 * Reads a certificate document (`{"schema": 1, "certificate": {...}}`).
 *
 * # Safety
 * `ring` must be live, `json` nul-terminated, `out` writable.
 */
enum UlrichStatus ulrich_certificate_from_json(const struct UlrichRing *ring,
                                               const char *json,
                                               struct UlrichCertificate **out);

/**
 * Writes the certificate document. Free it with [`ulrich_string_free`].
 *
 * # Safety
 * `cert` must be live and `out` writable.
 */
enum UlrichStatus ulrich_certificate_to_json(const struct UlrichCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must be null or a handle from this library.
 */
void ulrich_certificate_free(struct UlrichCertificate *cert);

/**
 * Checks the identity, the unit and the parameter conditions.
 *
 * # Safety
 * `cert` must be live and `out` writable.
 */
enum UlrichStatus ulrich_certificate_verify(const struct UlrichCertificate *cert, bool *out);

/**
 * Builds the resolution and writes it as JSON, with the checks when
 * `check` is set. Free the string with [`ulrich_string_free`].
 *
 * # Safety
 * `cert` must be live and `out` writable.
 */
enum UlrichStatus ulrich_resolution_json(const struct UlrichCertificate *cert,
                                         bool check,
                                         char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ULRICH_H */
