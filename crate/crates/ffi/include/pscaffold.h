#ifndef PSCAFFOLD_H
#define PSCAFFOLD_H

/* This file is generated by cbindgen from the pscaffold-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum PscStatus {
  PSC_STATUS_OK = 0,
  PSC_STATUS_INVALID_ARGUMENT = 1,
  PSC_STATUS_NOT_FULLY_RAMIFIED = 2,
  PSC_STATUS_DEGENERATE_DATA = 3,
  PSC_STATUS_PRECISION_EXHAUSTED = 4,
  PSC_STATUS_DECOMPOSITION_STALL = 5,
  PSC_STATUS_HYPOTHESIS_VIOLATED = 6,
  PSC_STATUS_UTF8 = 7,
  PSC_STATUS_NULL_POINTER = 8,
  PSC_STATUS_PANIC = 9,
} PscStatus;

/**
 * Opaque handle to a validated extension together with its computation
 * context.
 */
typedef struct PscExtension PscExtension;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or null if none was recorded. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *psc_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *psc_version(void);

/**
 * Build an extension from its defining data.
 *
 * `kind` is "abelian" or "cyclic"; `beta1_json` and `beta2_json` are series
 * literals of the form `[[exponent, coefficient], ...]`. A `precision` of 0
 * or less selects the default window. On success `*out` owns the handle;
 * release it with [`psc_extension_free`].
 *
 * # Safety
 * The string arguments must be valid NUL-terminated pointers (or null,
 * which is reported as an error) and `out` must be a valid writable slot.
 */
enum PscStatus psc_extension_build(uint32_t p,
                                   const char *kind,
                                   const char *beta1_json,
                                   const char *beta2_json,
                                   int64_t precision,
                                   struct PscExtension **out);

/**
 * Release a handle obtained from [`psc_extension_build`].
 *
 * # Safety
 * `ext` must be null or a handle from [`psc_extension_build`] that has not
 * been freed already.
 */
void psc_extension_free(struct PscExtension *ext);

/**
 * Reduced data, breaks and hypothesis flags as a JSON document.
 *
 * # Safety
 * `ext` must be a live handle and `out_json` a valid writable slot.
 */
enum PscStatus psc_extension_analyze_json(const struct PscExtension *ext, char **out_json);

/**
 * Build the scaffold pair and verify its valuation law on `trials` seeded
 * samples; the verdict and any counterexample are fields of the JSON
 * report.
 *
 * # Safety
 * `ext` must be a live handle and `out_json` a valid writable slot.
 */
enum PscStatus psc_scaffold_verify_json(const struct PscExtension *ext,
                                        uint32_t trials,
                                        uint64_t seed,
                                        char **out_json);

/**
 * The associated-order report (break tables, freeness verdicts, generator
 * certificate) as JSON. When the scaffold hypotheses fail the report is
 * `{"applicable": false}`.
 *
 * # Safety
 * `ext` must be a live handle and `out_json` a valid writable slot.
 */
enum PscStatus psc_order_report_json(const struct PscExtension *ext, char **out_json);

/**
 * Freeness survey over b1 in [b1_min, b1_max] and b2 = b1 + p^2 m for
 * m <= m_max, as tab-separated text with a header row.
 *
 * # Safety
 * `out_tsv` must be a valid writable slot.
 */
enum PscStatus psc_survey_tsv(uint32_t p,
                              int64_t b1_min,
                              int64_t b1_max,
                              int64_t m_max,
                              char **out_tsv);

/**
 * Run every symbolic identity certification; the JSON array lists each
 * check with its residual.
 *
 * # Safety
 * `out_json` must be a valid writable slot.
 */
enum PscStatus psc_identities_json(char **out_json);

/**
 * Free a string returned by any of the *_json / *_tsv functions.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not been
 * freed already.
 */
void psc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSCAFFOLD_H */
