#ifndef FLAGHERM_H
#define FLAGHERM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FhStatus {
  FH_STATUS_OK = 0,
  FH_STATUS_NULL_POINTER = 1,
  FH_STATUS_INVALID_UTF8 = 2,
  FH_STATUS_UNKNOWN_SPACE = 3,
  FH_STATUS_PARSE = 4,
  FH_STATUS_INVALID_METRIC = 5,
  FH_STATUS_INVALID_ACS = 6,
  FH_STATUS_ARITY = 7,
  FH_STATUS_DOMAIN = 8,
  FH_STATUS_UNSUPPORTED = 9,
  FH_STATUS_INTERNAL = 10,
} FhStatus;

/**
 * Opaque handle to a built-in flag space.
 */
typedef struct FhSpace FhSpace;

/**
 * Everything in a curvature report, as doubles.
 */
typedef struct FhReportValues {
  double n0_sq;
  double df_minus_sq;
  double df_plus_sq;
  double big_df_sq;
  double s;
  double s1;
  /**
   * s₂(t) = s2_a·t² + s2_b·t + s2_c
   */
  double s2_a;
  double s2_b;
  double s2_c;
  double s_j;
  double defect;
  /**
   * bit 0: W1, bit 1: W2, bit 2: W3; zero means Kähler
   */
  uint32_t gh_class;
} FhReportValues;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Looks up a built-in space ("su3-full", "cp3", "su4-full", "g2-u2", "g2-full").
 *
 * # Safety
 * `name` must be a valid C string and `out` a writable pointer.
 */
enum FhStatus fh_space_new(const char *name, struct FhSpace **out);

/**
 * # Safety
 * `space` must come from [`fh_space_new`] and not be freed twice. Null is ignored.
 */
void fh_space_free(struct FhSpace *space);

/**
 * Number of isotropy summands; 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
uintptr_t fh_space_summand_count(const struct FhSpace *space);

/**
 * Number of stored zero-sum triples; 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
uintptr_t fh_space_triple_count(const struct FhSpace *space);

/**
 * Full exact report for a numeric metric ("1,2/3,1") and structure ("+,+,-") as JSON.
 *
 * # Safety
 * Pointers must be valid; `*out` receives a string for [`fh_string_free`].
 */
enum FhStatus fh_report_json(const struct FhSpace *space,
                             const char *metric,
                             const char *acs,
                             char **out);

/**
 * Same report as [`fh_report_json`], reduced to doubles.
 *
 * # Safety
 * Pointers must be valid; `out` must point to writable storage.
 */
enum FhStatus fh_report_values(const struct FhSpace *space,
                               const char *metric,
                               const char *acs,
                               struct FhReportValues *out);

/**
 * Solves 2s₁ − s = 0 along a family ("x^2,x^2,1,x^2,1,1") for `var`; JSON out.
 *
 * # Safety
 * Pointers must be valid; `*out` receives a string for [`fh_string_free`].
 */
enum FhStatus fh_solve_json(const struct FhSpace *space,
                            const char *acs,
                            const char *family,
                            const char *var,
                            double tol,
                            char **out);

/**
 * Message for the most recent failure on this thread, or null. Owned by the library;
 * valid until the next failing call on the same thread.
 */
const char *fh_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void fh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLAGHERM_H */
