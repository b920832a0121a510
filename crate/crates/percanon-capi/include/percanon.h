#ifndef PERCANON_H
#define PERCANON_H

/* Generated by cbindgen from percanon-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; nonzero values match the CLI exit codes where they overlap.
 */
typedef enum PercanonStatus {
  PERCANON_STATUS_OK = 0,
  /**
   * A required pointer argument was null or not valid UTF-8.
   */
  PERCANON_STATUS_NULL_ARGUMENT = 1,
  /**
   * The input failed to parse or validate.
   */
  PERCANON_STATUS_INVALID_INPUT = 2,
  /**
   * An internal invariant or oracle check failed.
   */
  PERCANON_STATUS_VERIFICATION_FAILED = 3,
} PercanonStatus;

/**
 * An opaque filtered complex handle.
 */
typedef struct PercanonComplex PercanonComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The crate version as a static string; never freed.
 */
const char *percanon_version(void);

/**
 * The message for the most recent error on this thread. The pointer is
 * valid until the next failing call on the same thread; do not free it.
 */
const char *percanon_last_error_message(void);

/**
 * Release a string returned through an out-parameter.
 *
 * # Safety
 * `s` must have been produced by this library and not freed before.
 */
void percanon_string_free(char *s);

/**
 * Parse a filtered-complex file. With `close_faces`, missing faces enter at
 * the smallest compatible filtration value. The complex is validated.
 *
 * # Safety
 * `text` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum PercanonStatus percanon_complex_parse(const char *text,
                                           bool close_faces,
                                           struct PercanonComplex **out);

/**
 * Build a Vietoris-Rips filtration from a point-cloud file. `max_radius` is
 * a decimal literal so that level ties are decided exactly.
 *
 * # Safety
 * `points_text` and `max_radius` must be valid nul-terminated strings and
 * `out` a valid pointer.
 */
enum PercanonStatus percanon_rips(const char *points_text,
                                  size_t max_dim,
                                  const char *max_radius,
                                  struct PercanonComplex **out);

/**
 * Release a complex handle.
 *
 * # Safety
 * `complex` must come from this library and not be freed twice.
 */
void percanon_complex_free(struct PercanonComplex *complex);

/**
 * Number of cells in the complex; 0 for a null handle.
 *
 * # Safety
 * `complex` must be a live handle from this library (or null).
 */
size_t percanon_complex_cell_count(const struct PercanonComplex *complex);

/**
 * Serialize the complex in the filtered-complex file format.
 *
 * # Safety
 * `complex` must be a live handle and `out` a valid pointer; free the
 * result with [`percanon_string_free`].
 */
enum PercanonStatus percanon_complex_write(const struct PercanonComplex *complex, char **out);

/**
 * Compute barcodes over the rationals (`field_prime` 0) or Z/p, as a JSON
 * array of `{degree, birth_level, death_level, birth_value?, death_value?}`.
 *
 * # Safety
 * `complex` must be a live handle and `out_json` a valid pointer; free the
 * result with [`percanon_string_free`].
 */
enum PercanonStatus percanon_barcodes_json(const struct PercanonComplex *complex,
                                           uint32_t field_prime,
                                           bool drop_empty,
                                           char **out_json);

/**
 * The Krull-Schmidt summand listing as JSON.
 *
 * # Safety
 * Same contract as [`percanon_barcodes_json`].
 */
enum PercanonStatus percanon_summands_json(const struct PercanonComplex *complex,
                                           uint32_t field_prime,
                                           char **out_json);

/**
 * Factor a matrix-interchange differential; the output stream holds the
 * canonical form, the normalized basis change, and the Jordan permutation
 * (plus R, V, Vhat when `emit_certificate` is set), in the same interchange
 * format the CLI prints.
 *
 * # Safety
 * `matrix_text` must be a valid nul-terminated string and `out_text` a
 * valid pointer; free the result with [`percanon_string_free`].
 */
enum PercanonStatus percanon_reduce_matrix(const char *matrix_text,
                                           bool emit_certificate,
                                           char **out_text);

/**
 * Re-derive a reduction and run the independent oracle cross-checks; the
 * report lists one line per check.
 *
 * # Safety
 * Same contract as [`percanon_reduce_matrix`].
 */
enum PercanonStatus percanon_verify_matrix(const char *matrix_text, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERCANON_H */
