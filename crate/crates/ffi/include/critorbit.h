#ifndef CRITORBIT_H
#define CRITORBIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CritorbitStatus {
  CRITORBIT_STATUS_OK = 0,
  CRITORBIT_STATUS_NULL_POINTER = 1,
  CRITORBIT_STATUS_INVALID_UTF8 = 2,
  CRITORBIT_STATUS_INVALID_ARGUMENT = 3,
  CRITORBIT_STATUS_COMPUTATION = 4,
  CRITORBIT_STATUS_PANIC = 5,
} CritorbitStatus;

/**
 * Fixed-point proportion table of `[S_d]^n` for `n = 0..=n_max`.
 */
typedef struct CritorbitFppTable CritorbitFppTable;

/**
 * Polynomial with exact rational coefficients.
 */
typedef struct CritorbitPoly CritorbitPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL after a
 * successful call. Owned by the library.
 */
const char *critorbit_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void critorbit_string_free(char *s);

/**
 * Parse a polynomial: comma-separated rationals, constant term first
 * (`"5,0,0,1"`), or a named polynomial (`"x3+5"`, `"x2+1"`).
 *
 * # Safety
 * `spec` must be a valid C string; `out` must be writable.
 */
enum CritorbitStatus critorbit_poly_parse(const char *spec, struct CritorbitPoly **out);

/**
 * # Safety
 * `poly` must be NULL or a handle from [`critorbit_poly_parse`], not yet freed.
 */
void critorbit_poly_free(struct CritorbitPoly *poly);

/**
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_poly_degree(const struct CritorbitPoly *poly, size_t *out);

/**
 * Coefficients as a JSON array of rational strings, constant term first.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_poly_to_json(const struct CritorbitPoly *poly, char **out);

/**
 * Discriminant as an exact rational string `"a/b"`, such as `"-675/1"`.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_poly_discriminant(const struct CritorbitPoly *poly, char **out);

/**
 * Attracting-density report over primes up to `bound`, as JSON.
 * `modulus == 0` disables the residue-class breakdown.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_density_scan_json(const struct CritorbitPoly *poly,
                                                 uint64_t bound,
                                                 size_t workers,
                                                 uint64_t modulus,
                                                 char **out);

/**
 * Root frequency of `f'∘f^m` over primes up to `bound`, as JSON.
 *
 * # Safety
 * `poly` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_chebotarev_scan_json(const struct CritorbitPoly *poly,
                                                    uint32_t m,
                                                    uint64_t bound,
                                                    size_t workers,
                                                    char **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_new(uint64_t d,
                                             uint32_t n_max,
                                             struct CritorbitFppTable **out);

/**
 * # Safety
 * `table` must be NULL or a handle from [`critorbit_fpp_table_new`], not yet freed.
 */
void critorbit_fpp_table_free(struct CritorbitFppTable *table);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_n_max(const struct CritorbitFppTable *table,
                                               uint32_t *out);

/**
 * Nearest doubles to the endpoints of `fpp([S_d]^n)`. They coincide when the
 * value is known exactly; `exact` reports which case applies.
 *
 * # Safety
 * `table` must be a live handle; `lower`, `upper` and `exact` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_value(const struct CritorbitFppTable *table,
                                               uint32_t n,
                                               double *lower,
                                               double *upper,
                                               bool *exact);

/**
 * `fpp([S_d]^n)` as `"a/b"`, or `"a/b..c/d"` for a certified enclosure.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_value_string(const struct CritorbitFppTable *table,
                                                      uint32_t n,
                                                      char **out);

/**
 * Whether `fpp([S_d]^n) <= 2/(n+2)` for every row of the table.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_check_bound(const struct CritorbitFppTable *table,
                                                     bool *out);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_to_json(const struct CritorbitFppTable *table, char **out);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum CritorbitStatus critorbit_fpp_table_to_csv(const struct CritorbitFppTable *table, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRITORBIT_H */
