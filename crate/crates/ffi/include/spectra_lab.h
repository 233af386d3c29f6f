#ifndef SPECTRA_LAB_H
#define SPECTRA_LAB_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_UTF8 = 2,
  SL_STATUS_INVALID_ARGUMENT = 3,
  SL_STATUS_RESOURCE_CAP = 4,
  SL_STATUS_NON_CONVERGENCE = 5,
  SL_STATUS_INTERNAL = 6,
  SL_STATUS_PANIC = 7,
} SlStatus;

/**
 * A regular Cantor set.
 */
typedef struct SlCantorSet SlCantorSet;

/**
 * A finished run report.
 */
typedef struct SlReport SlReport;

/**
 * A subshift of finite type.
 */
typedef struct SlSubshift SlSubshift;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sl_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into the library from the same thread.
 */
const char *sl_last_error(void);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sl_string_free(char *s);

/**
 * Builds a Cantor set from a name such as `midthird`, `affine:1/4` or
 * `C(2)`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out_set` writable.
 */
enum SlStatus sl_cantor_set_new(const char *name, struct SlCantorSet **out_set);

/**
 * # Safety
 * `set` must come from [`sl_cantor_set_new`] and not have been freed.
 */
void sl_cantor_set_free(struct SlCantorSet *set);

/**
 * Encloses the Hausdorff dimension in `[*lo, *hi]` with width at most `tol`.
 *
 * # Safety
 * `set` must be a live handle; `lo` and `hi` writable.
 */
enum SlStatus sl_cantor_set_dimension(const struct SlCantorSet *set,
                                      double tol,
                                      double *lo,
                                      double *hi);

/**
 * Certified lower bound on the thickness from cylinders up to `depth`.
 *
 * # Safety
 * `set` must be a live handle; `lower` writable.
 */
enum SlStatus sl_cantor_set_thickness(const struct SlCantorSet *set, size_t depth, double *lower);

/**
 * Tries to certify `[a, b]` inside `k1 + k2` refining to at most `depth`.
 * `*certified` is false when the search stops without a certificate.
 *
 * # Safety
 * `k1` and `k2` must be live handles; `certified` writable.
 */
enum SlStatus sl_sumset_certify(const struct SlCantorSet *k1,
                                const struct SlCantorSet *k2,
                                double a,
                                double b,
                                size_t depth,
                                bool *certified);

/**
 * The full shift on `k` symbols.
 *
 * # Safety
 * `out_shift` must be writable.
 */
enum SlStatus sl_subshift_full(size_t k, struct SlSubshift **out_shift);

/**
 * Parses a subshift from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out_shift` writable.
 */
enum SlStatus sl_subshift_from_json(const char *json, struct SlSubshift **out_shift);

/**
 * # Safety
 * `shift` must come from this library and not have been freed.
 */
void sl_subshift_free(struct SlSubshift *shift);

/**
 * JSON form of a subshift. Release with [`sl_string_free`].
 *
 * # Safety
 * `shift` must be a live handle; `out_json` writable.
 */
enum SlStatus sl_subshift_to_json(const struct SlSubshift *shift, char **out_json);

/**
 * The subshift forbidding `word`, written as symbol labels separated by
 * spaces or commas, or as a run of single-character labels.
 *
 * # Safety
 * `shift` must be a live handle, `word` NUL-terminated, `out_shift` writable.
 */
enum SlStatus sl_subshift_avoid_word(const struct SlSubshift *shift,
                                     const char *word,
                                     struct SlSubshift **out_shift);

/**
 * Encloses the topological entropy in `[*lo, *hi]`.
 *
 * # Safety
 * `shift` must be a live handle; `lo` and `hi` writable.
 */
enum SlStatus sl_subshift_entropy(const struct SlSubshift *shift,
                                  double tol,
                                  double *lo,
                                  double *hi);

/**
 * Number of points fixed by the `p`-th power of the shift.
 *
 * # Safety
 * `shift` must be a live handle; `count` writable.
 */
enum SlStatus sl_subshift_fixed_points(const struct SlSubshift *shift, size_t p, uint64_t *count);

/**
 * Runs an experiment configuration given as JSON, as the command line
 * tool would, without writing any files.
 *
 * # Safety
 * `config_json` must be NUL-terminated and `out_report` writable.
 */
enum SlStatus sl_run(const char *config_json, struct SlReport **out_report);

/**
 * # Safety
 * `report` must come from [`sl_run`] and not have been freed.
 */
void sl_report_free(struct SlReport *report);

/**
 * Full report as pretty JSON. Release with [`sl_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out_json` writable.
 */
enum SlStatus sl_report_to_json(const struct SlReport *report, char **out_json);

/**
 * Report without provenance, as compact JSON. Equal configurations give
 * equal payloads. Release with [`sl_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out_json` writable.
 */
enum SlStatus sl_report_payload(const struct SlReport *report, char **out_json);

/**
 * Whether every attempted certificate in the run succeeded, and whether
 * the results are certified rather than heuristic.
 *
 * # Safety
 * `report` must be a live handle; both outputs writable.
 */
enum SlStatus sl_report_status(const struct SlReport *report,
                               bool *certificate_ok,
                               bool *certified);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECTRA_LAB_H */
